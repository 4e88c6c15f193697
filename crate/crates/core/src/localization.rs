//! Fixed-locus contributions on the 3-pointed space and the pushforward
//! cascade that turns their coefficients into the boundary formula.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::builders::{build_c_j, build_c_prime, build_c_prime_j, mumford_pattern, theorem_rhs_j, MARKED};
use crate::error::{Error, Result};
use crate::laurent::{default_window, laurent_expand_rational, LaurentSeries, LinearFactor, TPolynomial};
use crate::ops::{forget_pushforward, psi_multiply, PushMode};
use crate::par;
use crate::poly::{SiteTag, Symbol, SymbolKind, SymbolicPoly};
use crate::rational::Rational;
use crate::report::RelationReport;
use crate::strata::{Ambient, DecoratedStratum, DecorationFactor, Leg, TautClass, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LocusTag {
    /// The whole curve over ∞.
    Zero,
    /// Genus `h` over 0, genus `g − h` over ∞.
    H(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FixedLocus {
    pub genus: u32,
    pub tag: LocusTag,
}

impl FixedLocus {
    pub fn zero_genus(&self) -> u32 {
        match self.tag {
            LocusTag::Zero => 0,
            LocusTag::H(h) => h,
        }
    }

    pub fn infinity_genus(&self) -> u32 {
        self.genus - self.zero_genus()
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::new(self.genus, [MARKED, 2, 3])
    }
}

impl fmt::Display for FixedLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            LocusTag::Zero => write!(f, "F_0"),
            LocusTag::H(h) => write!(f, "F_{h}"),
        }
    }
}

/// `F_0, F_1, …, F_g`.
pub fn fixed_loci(g: u32) -> Vec<FixedLocus> {
    std::iter::once(LocusTag::Zero)
        .chain((1..=g).map(LocusTag::H))
        .map(|tag| FixedLocus { genus: g, tag })
        .collect()
}

fn check_locus(g: u32, locus: FixedLocus) -> Result<()> {
    if g == 0 || locus.genus != g {
        return Err(Error::OutOfRange(format!("locus {locus} does not belong to genus {g}")));
    }
    if let LocusTag::H(h) = locus.tag {
        if h == 0 || h > g {
            return Err(Error::OutOfRange(format!("h = {h} outside 1..={g}")));
        }
    }
    Ok(())
}

fn lambda(site: SiteTag, j: u32) -> SymbolicPoly {
    SymbolicPoly::var(Symbol::lambda(site, j).expect("index >= 1"))
}

/// `sign^0 t^n + sign λ_1 t^{n−1} + ⋯ + sign^n λ_n`.
fn chern_polynomial(site: SiteTag, n: u32, sign: i64) -> TPolynomial {
    let mut p = TPolynomial::term(n as i64, SymbolicPoly::one());
    for j in 1..=n {
        let c = if sign < 0 { Rational::sign_power(j as i64) } else { Rational::one() };
        p.add_term((n - j) as i64, lambda(site, j).scale(&c));
    }
    p
}

fn product(a: &TPolynomial, b: &TPolynomial) -> TPolynomial {
    let mut out = TPolynomial::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            out.add_term(ka + kb, ca * cb);
        }
    }
    out
}

fn psi(site: SiteTag) -> SymbolicPoly {
    SymbolicPoly::var(Symbol::psi(site))
}

/// Numerator and denominator factors of a locus contribution.
fn rational_form(locus: FixedLocus) -> (TPolynomial, Vec<LinearFactor>) {
    let g = locus.genus;
    let sign_inf = Rational::sign_power(locus.infinity_genus() as i64);
    let infinity = chern_polynomial(SiteTag::Infinity, locus.infinity_genus(), 1)
        .scale(&SymbolicPoly::constant(sign_inf));
    let inf_factors = [LinearFactor::t(-1), LinearFactor::new(-1, -&psi(SiteTag::Infinity))];
    match locus.tag {
        LocusTag::Zero => {
            debug_assert_eq!(locus.infinity_genus(), g);
            let mut den = vec![LinearFactor::t(1)];
            den.extend(inf_factors);
            (infinity, den)
        }
        LocusTag::H(h) => {
            let zero = chern_polynomial(SiteTag::Zero, h, -1);
            let mut den = vec![LinearFactor::t(1), LinearFactor::new(1, -&psi(SiteTag::Zero))];
            den.extend(inf_factors);
            (product(&zero, &infinity), den)
        }
    }
}

pub fn fixed_locus_contribution(g: u32, locus: FixedLocus) -> Result<LaurentSeries> {
    fixed_locus_contribution_in(g, locus, default_window(g))
}

pub fn fixed_locus_contribution_in(g: u32, locus: FixedLocus, window: (i64, i64)) -> Result<LaurentSeries> {
    check_locus(g, locus)?;
    let (num, den) = rational_form(locus);
    laurent_expand_rational(&num, &den, window)
}

fn window_for(g: u32, j: u32) -> (i64, i64) {
    let (lo, hi) = default_window(g);
    (lo.min(-3 - j as i64), hi)
}

/// Coefficient of `t^{−3−j}` on one locus.
pub fn raw_coefficient(g: u32, locus: FixedLocus, j: u32) -> Result<SymbolicPoly> {
    if j == 0 {
        return Err(Error::OutOfRange("j must be at least 1".into()));
    }
    fixed_locus_contribution_in(g, locus, window_for(g, j))?.coefficient(-3 - j as i64)
}

/// [`raw_coefficient`] times `(−1)^{j−1}`, so that the `F_0` part is
/// `−(ψ^{g+j} − λ1ψ^{g+j−1} + ⋯)` for every `j`. The relation is unchanged.
pub fn locus_coefficient(g: u32, locus: FixedLocus, j: u32) -> Result<SymbolicPoly> {
    Ok(raw_coefficient(g, locus, j)?.scale(&Rational::sign_power(j as i64 - 1)))
}

/// The class on the 3-pointed space represented by a coefficient. On `F_0`
/// the ∞ classes become classes at point 1; on `F_h` the two sides are the
/// vertices of a one-edge tree with `ψ_0`, `ψ_∞` at the node.
pub fn poly_to_class(locus: FixedLocus, poly: &SymbolicPoly) -> Result<TautClass> {
    let g = locus.genus;
    let mut out = TautClass::zero(locus.ambient());
    for (m, c) in poly.terms() {
        let mut zero = Vec::new();
        let mut inf = Vec::new();
        for &(s, e) in m.powers() {
            let target = match s.site {
                SiteTag::Zero if locus.tag != LocusTag::Zero => &mut zero,
                SiteTag::Infinity => &mut inf,
                _ => return Err(Error::UnsupportedDecoration(format!("{s} on {locus}"))),
            };
            target.push((s, e));
        }
        let to_factors = |syms: &[(Symbol, u32)], leg: Leg| -> Vec<DecorationFactor> {
            syms.iter()
                .map(|&(s, e)| match s.kind {
                    SymbolKind::Psi => DecorationFactor::Psi { leg, exponent: e },
                    SymbolKind::Lambda => DecorationFactor::Lambda { index: s.index, exponent: e },
                })
                .collect()
        };
        let s = match locus.tag {
            LocusTag::Zero => DecoratedStratum::single(g, [MARKED, 2, 3], to_factors(&inf, Leg::Marked(MARKED)))?,
            LocusTag::H(h) => DecoratedStratum::new(
                vec![
                    Vertex { genus: h, markings: vec![MARKED], decoration: to_factors(&zero, Leg::Toward(1)) },
                    Vertex { genus: g - h, markings: vec![2, 3], decoration: to_factors(&inf, Leg::Toward(0)) },
                ],
                vec![(0, 1)],
            )?,
        };
        out.add_term(s, c.clone())?;
    }
    Ok(out)
}

/// The `t^{−4}` coefficient on `F_h` against the double sum `c'_h`.
pub fn verify_cprime(g: u32, h: u32) -> Result<RelationReport> {
    let locus = FixedLocus { genus: g, tag: LocusTag::H(h) };
    check_locus(g, locus)?;
    let series = locus_coefficient(g, locus, 1)?;
    let pair = build_c_prime(g, h)?;
    let formula = pair.to_poly();
    let diff = &series - &formula;
    let lhs = poly_to_class(locus, &series)?;
    let rhs = pair.glue()?;
    let mut r = RelationReport::new(g, format!("cprime h={h}"), lhs, rhs)?;
    r.check("polynomial", diff.is_zero(), if diff.is_zero() { "0".to_string() } else { diff.to_string() });
    r.check(
        "bidegrees",
        pair.bidegrees() == (0..=g).map(|i| (i, g - i)).collect(),
        format!("{:?}", pair.bidegrees()),
    );
    Ok(r)
}

/// One locus through the cascade `· ψ_3`, forget 3, forget 2.
#[derive(Clone, Debug)]
pub struct LocusStages {
    pub locus: FixedLocus,
    pub coefficient: SymbolicPoly,
    pub initial: TautClass,
    pub after_psi: TautClass,
    pub after_dilaton: TautClass,
    pub after_string: TautClass,
}

pub fn run_locus(locus: FixedLocus, j: u32, mode: PushMode) -> Result<LocusStages> {
    let coefficient = locus_coefficient(locus.genus, locus, j)?;
    let initial = poly_to_class(locus, &coefficient)?;
    let after_psi = psi_multiply(&initial, 3)?;
    let after_dilaton = forget_pushforward(&after_psi, 3, mode)?;
    let after_string = forget_pushforward(&after_dilaton, 2, mode)?;
    Ok(LocusStages { locus, coefficient, initial, after_psi, after_dilaton, after_string })
}

pub fn run_cascade(g: u32, j: u32, mode: PushMode) -> Result<Vec<LocusStages>> {
    if g == 0 {
        return Err(Error::OutOfRange("genus must be at least 1".into()));
    }
    par::map(&fixed_loci(g), |&l| run_locus(l, j, mode)).into_iter().collect()
}

fn describe(a: &TautClass, b: &TautClass) -> String {
    match a.expanded().sub(&b.expanded()) {
        Ok(d) if d.is_zero() => "ok".into(),
        Ok(d) => format!("{} differing terms: {d}", d.len()),
        Err(e) => e.to_string(),
    }
}

fn mumford_on(g: u32, markings: &[u32], degree: u32) -> Result<TautClass> {
    let dec = vec![DecorationFactor::Mumford { leg: Leg::Marked(MARKED), degree }];
    Ok(TautClass::from_stratum(DecoratedStratum::single(g, markings.iter().copied(), dec)?, Rational::one()))
}

/// The cascade at `t^{−3−j}` with every displayed intermediate checked.
pub fn remark1_extract(g: u32, j: u32) -> Result<RelationReport> {
    extract(g, j, PushMode::Direct)
}

fn extract(g: u32, j: u32, mode: PushMode) -> Result<RelationReport> {
    let stages = run_cascade(g, j, mode)?;
    let two_g = Rational::from(2 * g as i64);
    let mut checks: Vec<(String, bool, String)> = Vec::new();
    let check = |checks: &mut Vec<(String, bool, String)>, name: String, a: &TautClass, b: &TautClass| {
        let detail = describe(a, b);
        checks.push((name, detail == "ok", detail));
    };
    let mut expected = TautClass::zero(Ambient::new(g, [MARKED]));
    for st in &stages {
        match st.locus.tag {
            LocusTag::Zero => {
                let want = -&SymbolicPoly::truncated_mumford(SiteTag::Infinity, g, (g + j) as i64);
                let ok = st.coefficient == want;
                let detail = if ok { "ok".into() } else { (&st.coefficient - &want).to_string() };
                checks.push(("F_0 coefficient".into(), ok, detail));
                let dil = mumford_on(g, &[MARKED, 2], g + j)?.scale(&-&two_g);
                check(&mut checks, "F_0 dilaton 2g".into(), &st.after_dilaton, &dil);
                let pat = mumford_pattern(g, j)?.scale(&-&two_g);
                check(&mut checks, "F_0 string".into(), &st.after_string, &pat);
                expected.add_class(&pat, &Rational::one())?;
            }
            LocusTag::H(h) if h == g => {
                let ok = st.after_psi.is_zero();
                checks.push((format!("F_{g} killed by psi_3"), ok, format!("{} terms", st.after_psi.len())));
            }
            LocusTag::H(h) => {
                let w = Rational::from(2 * (g - h) as i64);
                let cp = build_c_prime_j(g, h, j)?;
                check(&mut checks, format!("F_{h} coefficient"), &st.initial, &cp.glue()?);
                check(&mut checks, format!("F_{h} dilaton 2(g-h)"), &st.after_dilaton, &cp.with_right_markings(vec![2]).glue()?.scale(&w));
                let c = build_c_j(g, h, j)?.glue()?.scale(&w);
                check(&mut checks, format!("F_{h} string"), &st.after_string, &c);
                expected.add_class(&c, &Rational::one())?;
            }
        }
    }
    let final_class = TautClass::collect(Ambient::new(g, [MARKED]), stages.iter().map(|s| s.after_string.clone()))?;
    let theorem = theorem_rhs_j(g, j)?.sub(&mumford_pattern(g, j)?)?.scale(&two_g);
    check(&mut checks, "final = 2g(rhs - lhs)".into(), &final_class, &theorem);
    let variant = if j == 1 { "replay".to_string() } else { format!("remark1 j={j}") };
    let mut r = RelationReport::new(g, variant, final_class, expected)?;
    r.check("loci", stages.len() == g as usize + 1, format!("{}", stages.len()));
    for (n, p, d) in checks {
        r.check(n, p, d);
    }
    Ok(r)
}

/// The full derivation at `t^{−4}`. The corrected pushforward convention is
/// run alongside and any disagreement is logged, not failed.
pub fn replay_derivation(g: u32) -> Result<RelationReport> {
    let mut r = extract(g, 1, PushMode::Direct)?;
    match extract(g, 1, PushMode::Corrected) {
        Ok(c) => {
            let same = c.lhs.same_class(&r.lhs);
            r.note("corrected pushforward", same, describe(&c.lhs, &r.lhs));
        }
        Err(e) => r.note("corrected pushforward", false, e.to_string()),
    }
    Ok(r)
}

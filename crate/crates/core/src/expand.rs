//! Recursive rewriting of the boundary formula until no vertex carries a
//! reducible truncated Mumford factor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::builders::{theorem_rhs, MARKED};
use crate::error::{Error, Result};
use crate::ops::{reduce_site, reducible_sites, Site};
use crate::par;
use crate::rational::Rational;
use crate::render::{render_stratum, Style};
use crate::strata::{canonical_form, DecoratedStratum, TautClass, Vertex};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteOrder {
    #[default]
    Canonical,
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandOptions {
    pub max_steps: u64,
    /// Rewrite rounds to run; `Some(0)` returns the input untouched.
    pub depth: Option<u64>,
    pub order: SiteOrder,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { max_steps: DEFAULT_BUDGET, depth: None, order: SiteOrder::Canonical }
    }
}

/// `(reducible sites, genus of their vertices, decoration degree)`.
pub type Measure = (usize, u32, u32);

pub fn measure(s: &DecoratedStratum) -> Measure {
    let sites = reducible_sites(s);
    let genus = sites.iter().map(|x| s.vertices()[x.vertex].genus).sum();
    let degree = s.vertices().iter().map(Vertex::decoration_degree).sum();
    (sites.len(), genus, degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumFlags {
    pub term: String,
    pub coeff: Rational,
    pub automorphisms: u64,
    /// Genus of the vertex carrying point 1.
    pub marked_vertex_genus: u32,
    pub terminal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub genus: u32,
    pub normal_form: TautClass,
    pub steps: u64,
    pub rounds: u64,
    /// False when stopped by `depth` or the step budget.
    pub complete: bool,
    /// Rewrites whose output failed to lower the termination measure.
    pub measure_violations: u64,
    pub strata: Vec<StratumFlags>,
}

fn pick(s: &DecoratedStratum, order: SiteOrder) -> Option<Site> {
    let sites = reducible_sites(s);
    match order {
        SiteOrder::Canonical => sites.first().copied(),
        SiteOrder::Reverse => sites.last().copied(),
    }
}

/// One rule application at the first reducible site of the first term that
/// has one. The flag is true when nothing was reducible.
pub fn expand_step(c: &TautClass) -> Result<(TautClass, bool)> {
    let Some((s, coeff, site)) = c.terms().find_map(|(s, v)| pick(s, SiteOrder::Canonical).map(|x| (s, v, x))) else {
        return Ok((c.clone(), true));
    };
    let mut out = c.clone();
    out.add_term(s.clone(), -coeff.clone())?;
    out.add_class(&reduce_site(s, site)?, coeff)?;
    Ok((out, false))
}

struct Rewritten {
    class: TautClass,
    violations: u64,
}

fn rewrite(s: &DecoratedStratum, site: Site) -> Result<Rewritten> {
    let class = reduce_site(s, site)?;
    let before = measure(s);
    let violations = class.terms().filter(|(t, _)| measure(t) >= before).count() as u64;
    Ok(Rewritten { class, violations })
}

/// Rounds of simultaneous rewriting: every term with a reducible site is
/// rewritten once per round, terms in parallel.
pub fn expand_class(c: &TautClass, genus: u32, opts: ExpandOptions) -> Result<ExpansionReport> {
    let mut cur = c.clone();
    let mut steps = 0u64;
    let mut rounds = 0u64;
    let mut violations = 0u64;
    loop {
        let work: Vec<(DecoratedStratum, Rational, Site)> = cur
            .terms()
            .filter_map(|(s, v)| pick(s, opts.order).map(|x| (s.clone(), v.clone(), x)))
            .collect();
        if work.is_empty() {
            return Ok(report(genus, cur, steps, rounds, true, violations));
        }
        if opts.depth.is_some_and(|d| rounds >= d) {
            return Ok(report(genus, cur, steps, rounds, false, violations));
        }
        if steps + work.len() as u64 > opts.max_steps {
            let partial = report(genus, cur, steps, rounds, false, violations);
            return Err(Error::BudgetExceeded { budget: opts.max_steps, partial: Box::new(partial) });
        }
        let results = par::map(&work, |(s, _, site)| rewrite(s, *site));
        let mut next = cur.clone();
        for ((s, v, _), r) in work.iter().zip(results) {
            let r = r?;
            violations += r.violations;
            next.add_term(s.clone(), -v.clone())?;
            next.add_class(&r.class, v)?;
        }
        next.ensure_homogeneous("expansion round")?;
        steps += work.len() as u64;
        rounds += 1;
        cur = next;
    }
}

pub fn expand_full(g: u32) -> Result<ExpansionReport> {
    expand_full_with(g, ExpandOptions::default())
}

pub fn expand_full_with(g: u32, opts: ExpandOptions) -> Result<ExpansionReport> {
    expand_class(&theorem_rhs(g)?, g, opts)
}

fn report(genus: u32, normal_form: TautClass, steps: u64, rounds: u64, complete: bool, v: u64) -> ExpansionReport {
    let strata = normal_form
        .terms()
        .map(|(s, c)| StratumFlags {
            term: render_stratum(s, Style::Text),
            coeff: c.clone(),
            automorphisms: canonical_form(s).automorphisms,
            marked_vertex_genus: s.vertex_of_marking(MARKED).map_or(0, |v| s.vertices()[v].genus),
            terminal: reducible_sites(s).is_empty(),
        })
        .collect();
    ExpansionReport { genus, normal_form, steps, rounds, complete, measure_violations: v, strata }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrality {
    pub integral: usize,
    pub non_integral: usize,
}

impl Integrality {
    fn record(&mut self, c: &Rational) {
        if c.is_integer() {
            self.integral += 1;
        } else {
            self.non_integral += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionSummary {
    pub genus: u32,
    pub terms: usize,
    pub zero_class: bool,
    pub all_terminal: bool,
    pub marked_on_genus_zero: bool,
    /// Marked-vertex genus to number of strata.
    pub marked_vertex_genera: BTreeMap<u32, usize>,
    pub raw: Integrality,
    pub times_automorphisms: Integrality,
    pub over_automorphisms: Integrality,
    /// Undecorated graph to number of strata.
    pub shapes: BTreeMap<String, usize>,
    pub non_integral_examples: Vec<String>,
}

pub fn analyze(r: &ExpansionReport) -> ExpansionSummary {
    let mut s = ExpansionSummary {
        genus: r.genus,
        terms: r.normal_form.len(),
        zero_class: r.normal_form.is_zero(),
        all_terminal: r.strata.iter().all(|f| f.terminal),
        marked_on_genus_zero: r.strata.iter().all(|f| f.marked_vertex_genus == 0),
        marked_vertex_genera: BTreeMap::new(),
        raw: Integrality::default(),
        times_automorphisms: Integrality::default(),
        over_automorphisms: Integrality::default(),
        shapes: BTreeMap::new(),
        non_integral_examples: vec![],
    };
    for ((st, c), f) in r.normal_form.terms().zip(&r.strata) {
        *s.marked_vertex_genera.entry(f.marked_vertex_genus).or_default() += 1;
        let aut = Rational::from(f.automorphisms as i64);
        s.raw.record(c);
        s.times_automorphisms.record(&(c * &aut));
        s.over_automorphisms.record(&c.checked_div(&aut).expect("automorphism order >= 1"));
        if !c.is_integer() && s.non_integral_examples.len() < 5 {
            s.non_integral_examples.push(format!("{c}·{}", f.term));
        }
        *s.shapes.entry(shape(st)).or_default() += 1;
    }
    s
}

fn shape(s: &DecoratedStratum) -> String {
    let bare: Vec<Vertex> =
        s.vertices().iter().map(|v| Vertex { genus: v.genus, markings: v.markings.clone(), decoration: vec![] }).collect();
    match DecoratedStratum::new(bare, s.edges().to_vec()) {
        Ok(b) => render_stratum(&canonical_form(&b).stratum, Style::Text),
        Err(e) => e.to_string(),
    }
}

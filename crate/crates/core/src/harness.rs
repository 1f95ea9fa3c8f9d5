//! Random corpora and systematic verification.
//!
//! Every corpus member is analyzed completely and run through a fixed list of
//! checks. Most checks are implications between invariants that must hold for
//! all lattice polytopes; a few compare a fast algorithm against an oracle.
//! For degree-2 members the six predicates
//!
//! | | |
//! |---|---|
//! | A | `h*₁ ≥ h*₂` |
//! | B | `h*₁ + 1 ∤ h*₂` |
//! | C | IDP |
//! | D | spanning |
//! | E | `deg P̃ ≠ 1` |
//! | F | level |
//!
//! are recorded and the arrows `A⇒B`, `A⇒C`, `B⇒E`, `C⇒D`, `D⇒E`, `E⇒F`,
//! `F⇒E` are checked. Members that show a non-implication (premises true,
//! conclusion false) are tallied as witnesses.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dilates::Dilates;
use crate::ehrhart::{h_star, lattice_points, HStarVector};
use crate::graded::{is_clean_simplex, toric_counts_of_idp, GradedBettiCell, Koszul};
use crate::io::PolytopeFile;
use crate::lattice::coordinates_in_basis;
use crate::monoid::{
    generator_profile_up_to, is_idp_with, is_level_with, spanning_criterion, spanning_report_with,
    IdpResult, LevelReport, SublatticeReport,
};
use crate::oracle;
use crate::polytope::{binomial_u128, Point, Polytope};
use crate::report::{
    EhrhartSection, IdpSection, LevelSection, Report, SpanningSection, SCHEMA_VERSION,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub seed: u64,
    /// Number of random members to accept.
    pub count: usize,
    pub dim_min: usize,
    pub dim_max: usize,
    /// Bound on the diagonal of the random edge matrices.
    pub entry_bound: i64,
    /// Share of candidates, in percent, built as hulls of random point subsets
    /// instead of simplices.
    pub non_simplex_percent: u32,
    pub vertices_min: usize,
    pub vertices_max: usize,
    pub degree_min: Option<usize>,
    pub degree_max: Option<usize>,
    /// Candidates to try before giving up; defaults to `1000 · count + 1000`.
    pub budget: Option<usize>,
    pub reference_examples: bool,
    pub suites: SuiteConfig,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 1,
            count: 100,
            dim_min: 2,
            dim_max: 4,
            entry_bound: 5,
            non_simplex_percent: 25,
            vertices_min: 4,
            vertices_max: 8,
            degree_min: None,
            degree_max: None,
            budget: None,
            reference_examples: false,
            suites: SuiteConfig::default(),
        }
    }
}

/// Size limits for the expensive checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Koszul checks run when `#(P ∩ ℤⁿ)` is at most this.
    pub betti_max_points: usize,
    pub toric_max_degree: usize,
    /// Largest number of monomials in the top toric degree.
    pub toric_monomial_limit: u64,
    /// Oracle comparisons run up to this dimension …
    pub oracle_max_dim: usize,
    /// … and this normalized volume.
    pub oracle_max_volume: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            betti_max_points: 12,
            toric_max_degree: 4,
            toric_monomial_limit: 20_000,
            oracle_max_dim: 3,
            oracle_max_volume: 40,
        }
    }
}

/// Simplex with a vertex at the origin whose other vertices are the rows of a
/// random lower-triangular matrix: diagonal entries in `1..=entry_bound`,
/// entries left of the diagonal reduced modulo the diagonal entry of their
/// row. The normalized volume is the product of the diagonal.
pub fn random_simplex<R: Rng>(dim: usize, entry_bound: i64, rng: &mut R) -> Result<Polytope> {
    Polytope::from_i64(&random_simplex_vertices(dim, entry_bound, rng)?)
}

fn random_simplex_vertices<R: Rng>(dim: usize, entry_bound: i64, rng: &mut R) -> Result<Vec<Point>> {
    if dim == 0 || entry_bound < 1 {
        return Err(Error::InvalidArgument(
            "random simplices need dim ≥ 1 and entry bound ≥ 1".into(),
        ));
    }
    let mut vertices = vec![vec![0i64; dim]];
    for i in 0..dim {
        let d = rng.random_range(1..=entry_bound);
        let mut row = vec![0i64; dim];
        for x in row.iter_mut().take(i) {
            *x = rng.random_range(0..d);
        }
        row[i] = d;
        vertices.push(row);
    }
    Ok(vertices)
}

/// Hull of a random subset of the lattice points of a random simplex or of
/// its double. `None` when the subset is not full-dimensional.
pub fn random_point_subset_polytope<R: Rng>(
    dim: usize,
    entry_bound: i64,
    vertices: (usize, usize),
    rng: &mut R,
) -> Result<Option<Polytope>> {
    let simplex = random_simplex(dim, entry_bound, rng)?;
    let dilate = rng.random_range(1..=2u64);
    let points = lattice_points(&simplex, dilate)?;
    let lo = vertices.0.max(dim + 1).min(points.len());
    let hi = vertices.1.max(lo).min(points.len());
    let amount = rng.random_range(lo..=hi);
    let chosen: Vec<Point> = sample(rng, points.len(), amount)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();
    let p = Polytope::from_i64(&chosen)?;
    Ok(p.is_full_dimensional().then_some(p))
}

/// A known example with its expected properties.
#[derive(Clone, Debug)]
pub struct ReferenceExample {
    pub name: &'static str,
    pub vertices: Vec<Point>,
    pub hstar: Vec<u64>,
    pub predicates: Goldens,
    pub deg_tilde: Option<usize>,
    /// A point of `kP` outside the lattice generated by `P × {1}`, given as
    /// `(k, point)`.
    pub off_lattice: Option<(usize, Point)>,
}

/// Expected predicate values; `None` where nothing is claimed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Goldens {
    pub a: Option<bool>,
    pub b: Option<bool>,
    pub c: Option<bool>,
    pub d: Option<bool>,
    pub e: Option<bool>,
    pub f: Option<bool>,
}

pub fn reference_examples() -> Vec<ReferenceExample> {
    let reeve = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]];
    vec![
        ReferenceExample {
            name: "reeve",
            vertices: reeve.clone(),
            hstar: vec![1, 0, 1, 0],
            predicates: Goldens {
                a: Some(false),
                b: Some(false),
                c: Some(false),
                d: Some(false),
                e: Some(true),
                f: Some(true),
            },
            deg_tilde: Some(0),
            off_lattice: None,
        },
        ReferenceExample {
            name: "parity-4",
            vertices: vec![
                vec![0, 0, 0, 0],
                vec![1, 1, 0, 0],
                vec![1, 0, 1, 0],
                vec![1, 0, 0, 1],
                vec![0, 1, 1, 0],
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 1],
            ],
            hstar: vec![1, 2, 5, 0, 0],
            predicates: Goldens {
                a: Some(false),
                b: Some(true),
                c: Some(false),
                d: Some(false),
                ..Goldens::default()
            },
            deg_tilde: None,
            off_lattice: Some((2, vec![1, 1, 1, 0])),
        },
        ReferenceExample {
            name: "idp-tetrahedron",
            vertices: vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 4, 0], vec![1, 0, 3]],
            hstar: vec![1, 5, 6, 0],
            predicates: Goldens {
                a: Some(false),
                b: Some(false),
                c: Some(true),
                d: Some(true),
                ..Goldens::default()
            },
            deg_tilde: None,
            off_lattice: None,
        },
        ReferenceExample {
            name: "reeve-tilde",
            vertices: reeve,
            hstar: vec![1, 0, 1, 0],
            predicates: Goldens {
                b: Some(false),
                d: Some(false),
                e: Some(true),
                ..Goldens::default()
            },
            deg_tilde: Some(0),
            off_lattice: None,
        },
        ReferenceExample {
            name: "idp-tetrahedron-2",
            vertices: vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 4, 0], vec![1, 0, 4]],
            hstar: vec![1, 6, 9, 0],
            predicates: Goldens {
                a: Some(false),
                b: Some(true),
                c: Some(true),
                ..Goldens::default()
            },
            deg_tilde: None,
            off_lattice: None,
        },
    ]
}

impl ReferenceExample {
    pub fn polytope(&self) -> Result<Polytope> {
        Polytope::from_i64(&self.vertices)
    }

    /// Differences between the claims and `record`.
    pub fn mismatches(&self, record: &CorpusRecord) -> Vec<String> {
        let mut out = Vec::new();
        let Some(eh) = &record.report.ehrhart else {
            return vec!["record has no h*-vector".into()];
        };
        if eh.hstar != self.hstar {
            out.push(format!("h* {:?}, expected {:?}", eh.hstar, self.hstar));
        }
        let Some(imp) = &record.report.implications else {
            out.push("record has no implication report".into());
            return out;
        };
        let got = imp.predicates;
        let pairs = [
            ("A", self.predicates.a, got.a),
            ("B", self.predicates.b, got.b),
            ("C", self.predicates.c, got.c),
            ("D", self.predicates.d, got.d),
            ("E", self.predicates.e, got.e),
            ("F", self.predicates.f, got.f),
        ];
        for (label, want, have) in pairs {
            if want.is_some_and(|w| w != have) {
                out.push(format!("predicate {label} is {have}, expected {}", !have));
            }
        }
        if let (Some(want), Some(sp)) = (self.deg_tilde, &record.report.spanning) {
            if sp.deg_tilde != want {
                out.push(format!("deg P̃ = {}, expected {want}", sp.deg_tilde));
            }
        }
        if let Some((k, point)) = &self.off_lattice {
            match off_lattice_witness(&record.polytope, *k, point) {
                Ok(true) => {}
                Ok(false) => out.push(format!("{point:?} is not an off-lattice point of {k}P")),
                Err(e) => out.push(format!("off-lattice check failed: {e}")),
            }
        }
        out
    }
}

/// Whether `point ∈ kP` while `(point, k)` is outside the lattice generated
/// by the points `(p, 1)`, `p ∈ P ∩ ℤⁿ`.
pub fn off_lattice_witness(p: &Polytope, k: usize, point: &[i64]) -> Result<bool> {
    if !p.contains(point, k as u64)? {
        return Ok(false);
    }
    let s = crate::monoid::spanning_report(p)?;
    let mut lifted: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
    lifted.push(BigInt::from(k));
    Ok(coordinates_in_basis(&s.basis, &lifted).is_err())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct Predicates {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
    pub f: bool,
}

impl Predicates {
    fn get(&self, label: char) -> bool {
        match label {
            'A' => self.a,
            'B' => self.b,
            'C' => self.c,
            'D' => self.d,
            'E' => self.e,
            'F' => self.f,
            _ => unreachable!("unknown predicate {label}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrowOutcome {
    /// The polytope does not have degree 2.
    NotApplicable,
    /// The premise is false.
    Vacuous,
    Holds,
    Violated,
}

/// `(premise, conclusion)` for every arrow checked on degree-2 polytopes.
pub const ARROWS: [(char, char); 7] = [
    ('A', 'B'),
    ('A', 'C'),
    ('B', 'E'),
    ('C', 'D'),
    ('D', 'E'),
    ('E', 'F'),
    ('F', 'E'),
];

/// `(premises, conclusion)` for every non-implication to be witnessed.
pub const NON_IMPLICATIONS: [(&str, char); 11] = [
    ("B", 'A'),
    ("B", 'C'),
    ("B", 'D'),
    ("C", 'A'),
    ("C", 'B'),
    ("D", 'A'),
    ("D", 'B'),
    ("D", 'C'),
    ("E", 'B'),
    ("E", 'D'),
    ("BC", 'A'),
];

pub fn arrow_label(from: char, to: char) -> String {
    format!("{from}=>{to}")
}

pub fn non_implication_label(premises: &str, to: char) -> String {
    let joined: Vec<String> = premises.chars().map(String::from).collect();
    format!("{}!=>{to}", joined.join("&"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicationReport {
    pub degree_two: bool,
    pub predicates: Predicates,
    pub arrows: BTreeMap<String, ArrowOutcome>,
    /// Non-implications this polytope witnesses.
    pub witnesses: Vec<String>,
}

impl ImplicationReport {
    pub fn violations(&self) -> Vec<&str> {
        self.arrows
            .iter()
            .filter(|(_, o)| **o == ArrowOutcome::Violated)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

pub fn implication_report(p: &Polytope) -> Result<ImplicationReport> {
    let h = h_star(p)?;
    let mut dil = Dilates::new(p);
    let idp = is_idp_with(&h, &mut dil)?;
    let profile = generator_profile_up_to(crate::monoid::generator_degree_bound(&h), &mut dil)?;
    let spanning = spanning_report_with(&h, &mut dil)?;
    let level = is_level_with(&h, &profile, &mut dil)?;
    Ok(implication_report_from(&h, &idp, &spanning, &level))
}

pub fn implication_report_from(
    h: &HStarVector,
    idp: &IdpResult,
    spanning: &SublatticeReport,
    level: &LevelReport,
) -> ImplicationReport {
    let (h1, h2) = (h.get(1), h.get(2));
    let predicates = Predicates {
        a: h1 >= h2,
        b: h2 % (h1 + 1) != 0,
        c: idp.value,
        d: spanning.is_spanning,
        e: spanning.deg_tilde() != 1,
        f: level.is_level,
    };
    let degree_two = h.degree() == 2;
    let arrows = ARROWS
        .iter()
        .map(|&(from, to)| {
            let outcome = match (degree_two, predicates.get(from), predicates.get(to)) {
                (false, _, _) => ArrowOutcome::NotApplicable,
                (true, false, _) => ArrowOutcome::Vacuous,
                (true, true, true) => ArrowOutcome::Holds,
                (true, true, false) => ArrowOutcome::Violated,
            };
            (arrow_label(from, to), outcome)
        })
        .collect();
    let witnesses = if degree_two {
        NON_IMPLICATIONS
            .iter()
            .filter(|(prem, to)| prem.chars().all(|c| predicates.get(c)) && !predicates.get(*to))
            .map(|(prem, to)| non_implication_label(prem, *to))
            .collect()
    } else {
        Vec::new()
    };
    ImplicationReport {
        degree_two,
        predicates,
        arrows,
        witnesses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Violated,
    /// Premises held but the check was beyond a size cap.
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    /// Either a bug in this crate or a false premise in one of the relations it checks.
    Fatal,
    /// Contradicts a result from outside the core theory; reported, not fatal.
    External,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub severity: Severity,
    pub detail: String,
}

/// Names of the per-polytope checks.
pub mod checks {
    /// `h*_s ≤ h*₁` ⇒ no module generators in degree `≥ s`.
    pub const GENERATOR_BOUND: &str = "generator-bound";
    /// No module generators above `min(deg, dim − 1)`.
    pub const GENERATOR_DEGREE_RANGE: &str = "generator-degree-range";
    /// Degree 2 and `h*₂ ≤ h*₁` ⇒ IDP.
    pub const QUADRATIC_IDP: &str = "quadratic-idp";
    pub const IDP_SPANNING: &str = "idp-spanning";
    /// `h̃*₁ = h*₁`, `h̃*_d = h*_d`, `h̃*ᵢ ≤ h*ᵢ`.
    pub const TILDE_HSTAR: &str = "tilde-hstar";
    /// `h*₁ + h*_d ≥ Σ_{i=2}^{d−1} h*ᵢ` ⇒ spanning.
    pub const SPANNING_CRITERION: &str = "spanning-criterion";
    /// `d ≥ 5` and `deg ≥ 3` ⇒ the spanning criterion fails.
    pub const CRITERION_HIGH_DIM: &str = "criterion-high-dim";
    /// `d = 4`, `deg ≥ 3`, `h*₁ + h*₄ ≥ h*₂ + h*₃` ⇒ `h*₁ = h*₂ = h*₃ = h*₄`.
    pub const DIM4_EQUAL_ENTRIES: &str = "dim4-equal-entries";
    /// Level ⇒ `deg P̃ ≠ deg P − 1`.
    pub const LEVEL_TILDE_DEGREE: &str = "level-tilde-degree";
    /// Spanning ⇒ `h*₁ ≤ h*ᵢ` for `1 ≤ i < deg P`.
    pub const SPANNING_LOWER_BOUND: &str = "spanning-lower-bound";
    /// `β_{0,j}` from Koszul homology equals the sumset generator count `g_j`.
    pub const KOSZUL_GENERATORS: &str = "koszul-generators";
    /// `β_{p,p+s} = 0` for `0 ≤ p ≤ h*₁ − h*_s`.
    pub const BETTI_VANISHING: &str = "betti-vanishing";
    /// IDP and `h*_s ≤ h*₁ − 1` ⇒ no toric generators above degree `s`.
    pub const TORIC_DEGREE_BOUND: &str = "toric-degree-bound";
    /// IDP and not a clean simplex ⇒ no toric generators in degree `dim + 1`.
    pub const TORIC_NON_CLEAN: &str = "toric-non-clean";
    /// Polygons: toric ideal nonzero and generated by quadrics ⇔ `h*₂ < h*₁`.
    pub const POLYGON_QUADRICS: &str = "polygon-quadrics";
    pub const TORIC_ORACLE: &str = "toric-oracle";
    pub const HSTAR_ORACLE: &str = "hstar-oracle";
    pub const IDP_ORACLE: &str = "idp-oracle";
    pub const LEVEL_ORACLE: &str = "level-oracle";
    pub const REFERENCE_GOLDENS: &str = "reference-goldens";
}

/// One analyzed corpus member.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusRecord {
    #[serde(flatten)]
    pub report: Report,
    pub origin: String,
    pub points: usize,
    pub checks: BTreeMap<&'static str, Outcome>,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub polytope: Polytope,
    #[serde(skip)]
    pub generators: BTreeMap<usize, usize>,
}

impl CorpusRecord {
    pub fn implications(&self) -> &ImplicationReport {
        self.report.implications.as_ref().expect("corpus records carry implications")
    }

    pub fn hstar(&self) -> &[u64] {
        &self.report.ehrhart.as_ref().expect("corpus records carry h*").hstar
    }

    pub fn betti(&self) -> Option<&[GradedBettiCell]> {
        self.report.betti.as_deref()
    }

    pub fn outcome(&self, check: &str) -> Option<Outcome> {
        self.checks.get(check).copied()
    }

    fn record(&mut self, check: &'static str, passed: bool, detail: impl FnOnce() -> String) {
        self.record_with(check, Severity::Fatal, passed, detail);
    }

    fn record_with(
        &mut self,
        check: &'static str,
        severity: Severity,
        passed: bool,
        detail: impl FnOnce() -> String,
    ) {
        if passed {
            self.checks.entry(check).or_insert(Outcome::Pass);
        } else {
            self.checks.insert(check, Outcome::Violated);
            self.violations.push(Violation {
                check: check.into(),
                severity,
                detail: detail(),
            });
        }
    }

    fn skip(&mut self, check: &'static str) {
        self.checks.entry(check).or_insert(Outcome::Skipped);
    }
}

/// Analyzes `p` completely and runs every applicable check.
pub fn analyze(
    name: String,
    origin: &str,
    p: &Polytope,
    suites: &SuiteConfig,
) -> Result<CorpusRecord> {
    let h = h_star(p)?;
    let d = h.dim();
    let s = h.degree();
    let mut dil = Dilates::new(p);
    let idp = is_idp_with(&h, &mut dil)?;
    let profile = generator_profile_up_to(d.saturating_sub(1), &mut dil)?;
    let spanning = spanning_report_with(&h, &mut dil)?;
    let level = is_level_with(&h, &profile, &mut dil)?;
    let implications = implication_report_from(&h, &idp, &spanning, &level);
    let points = dil.count(1)?;

    let mut report = Report::bare(Some(name.clone()), p);
    report.ehrhart = Some(EhrhartSection::new(&h));
    report.idp = Some(IdpSection::new(&idp));
    report.generators_by_degree = Some(profile.counts.clone());
    report.spanning = Some(SpanningSection::new(&spanning));
    report.level = Some(LevelSection::new(&level));
    report.implications = Some(implications.clone());

    let mut rec = CorpusRecord {
        report,
        origin: origin.into(),
        points,
        checks: BTreeMap::new(),
        violations: Vec::new(),
        polytope: p.clone(),
        generators: profile.counts.clone(),
    };
    let hv = |i: usize| h.get(i);

    for arrow in implications.violations() {
        rec.violations.push(Violation {
            check: arrow.into(),
            severity: Severity::Fatal,
            detail: format!("predicates {:?}", implications.predicates),
        });
    }

    rec.record(checks::IDP_SPANNING, !idp.value || spanning.is_spanning, || {
        format!("IDP but q = {}", spanning.q)
    });
    let range = s.min(d.saturating_sub(1));
    rec.record(
        checks::GENERATOR_DEGREE_RANGE,
        profile.counts.iter().all(|(&k, &c)| k <= range || c == 0),
        || format!("generators {:?} above degree {range}", profile.counts),
    );
    rec.record(
        checks::GENERATOR_DEGREE_RANGE,
        idp.value == profile.idp(),
        || format!("IDP {} but generators {:?}", idp.value, profile.counts),
    );
    if s >= 1 && hv(s) <= hv(1) {
        rec.record(
            checks::GENERATOR_BOUND,
            profile.counts.iter().all(|(&k, &c)| k < s || c == 0),
            || format!("generators {:?} with degree {s}", profile.counts),
        );
    }
    if s == 2 && hv(2) <= hv(1) {
        rec.record(checks::QUADRATIC_IDP, idp.value, || {
            format!("h* {:?} but witness {:?}", h.entries(), idp.witness)
        });
    }
    let ht = &spanning.h_tilde;
    rec.record(
        checks::TILDE_HSTAR,
        ht.get(1) == hv(1) && ht.get(d) == hv(d) && (0..=d).all(|i| ht.get(i) <= hv(i)),
        || format!("h̃* {:?} against h* {:?}", ht.entries(), h.entries()),
    );
    let criterion = spanning_criterion(&h);
    if criterion {
        rec.record(checks::SPANNING_CRITERION, spanning.is_spanning, || {
            format!("criterion holds for h* {:?} but q = {}", h.entries(), spanning.q)
        });
    }
    if d >= 5 && s >= 3 {
        rec.record(checks::CRITERION_HIGH_DIM, !criterion, || {
            format!("criterion holds for h* {:?}", h.entries())
        });
    }
    if d == 4 && s >= 3 && hv(1) + hv(4) >= hv(2) + hv(3) {
        rec.record(
            checks::DIM4_EQUAL_ENTRIES,
            hv(1) == hv(2) && hv(2) == hv(3) && hv(3) == hv(4),
            || format!("h* {:?}", h.entries()),
        );
    }
    if level.is_level && s >= 1 {
        rec.record(checks::LEVEL_TILDE_DEGREE, spanning.deg_tilde() != s - 1, || {
            format!("level with deg P = {s}, deg P̃ = {}", spanning.deg_tilde())
        });
    }
    if spanning.is_spanning {
        rec.record_with(
            checks::SPANNING_LOWER_BOUND,
            Severity::External,
            (1..s).all(|i| hv(1) <= hv(i)),
            || format!("spanning with h* {:?}", h.entries()),
        );
    }

    if points <= suites.betti_max_points {
        betti_checks(&mut rec, p, &h, &profile.counts)?;
    } else {
        rec.skip(checks::KOSZUL_GENERATORS);
        if hv(1) >= hv(s) {
            rec.skip(checks::BETTI_VANISHING);
        }
    }

    if idp.value {
        toric_checks(&mut rec, p, &h, points, suites)?;
    }

    if d <= suites.oracle_max_dim && h.normalized_volume() <= suites.oracle_max_volume && p.is_full_dimensional() {
        oracle_checks(&mut rec, p, &h, &idp, &level)?;
    }
    Ok(rec)
}

fn capped<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::CapExceeded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn betti_checks(
    rec: &mut CorpusRecord,
    p: &Polytope,
    h: &HStarVector,
    generators: &BTreeMap<usize, usize>,
) -> Result<()> {
    let d = h.dim();
    let s = h.degree();
    let mut koszul = Koszul::new(p)?;
    let mut cells = Vec::new();
    let mut cap_hit = false;
    for j in 0..=d.saturating_sub(1).max(1) {
        match capped(koszul.betti(0, j))? {
            Some(value) => {
                cells.push(GradedBettiCell { p: 0, j, value });
                let expected = match j {
                    0 => 1,
                    1 => 0,
                    _ => generators.get(&j).copied().unwrap_or(0) as u64,
                };
                rec.record(checks::KOSZUL_GENERATORS, value == expected, || {
                    format!("β_(0,{j}) = {value}, sumset count {expected}")
                });
            }
            None => cap_hit = true,
        }
    }
    if cap_hit {
        rec.skip(checks::KOSZUL_GENERATORS);
    }
    let (h1, hs) = (h.get(1), h.get(s));
    if s >= 1 && h1 >= hs {
        let mut cap_hit = false;
        for hom in 0..=(h1 - hs) as usize {
            match capped(koszul.betti(hom, hom + s))? {
                Some(value) => {
                    if hom > 0 || !cells.iter().any(|c| c.p == 0 && c.j == s) {
                        cells.push(GradedBettiCell { p: hom, j: hom + s, value });
                    }
                    rec.record(checks::BETTI_VANISHING, value == 0, || {
                        format!("β_({hom},{}) = {value} with h* {:?}", hom + s, h.entries())
                    });
                }
                None => {
                    cap_hit = true;
                    break;
                }
            }
        }
        if cap_hit {
            rec.skip(checks::BETTI_VANISHING);
        }
    }
    cells.sort_by_key(|c| (c.p, c.j));
    rec.report.betti = Some(cells);
    Ok(())
}

fn toric_checks(
    rec: &mut CorpusRecord,
    p: &Polytope,
    h: &HStarVector,
    points: usize,
    suites: &SuiteConfig,
) -> Result<()> {
    let d = h.dim();
    let s = h.degree();
    let n = points as u128;
    let j_max = (2..=suites.toric_max_degree)
        .take_while(|&j| binomial_u128(n + j as u128 - 1, j as u128) <= suites.toric_monomial_limit as u128)
        .last();
    let bound_applies = s >= 1 && h.get(s) < h.get(1);
    let non_clean = !is_clean_simplex(p)?;
    let Some(j_max) = j_max else {
        if bound_applies && s < suites.toric_max_degree {
            rec.skip(checks::TORIC_DEGREE_BOUND);
        }
        return Ok(());
    };
    let Some(counts) = capped(toric_counts_of_idp(p, j_max))? else {
        return Ok(());
    };
    if bound_applies && s < j_max {
        rec.record(
            checks::TORIC_DEGREE_BOUND,
            counts.iter().all(|(&j, &c)| j <= s || c == 0),
            || format!("toric counts {counts:?} with h* {:?}", h.entries()),
        );
    }
    if non_clean && d < j_max {
        rec.record(checks::TORIC_NON_CLEAN, counts.get(&(d + 1)) == Some(&0), || {
            format!("toric counts {counts:?} in dimension {d}")
        });
    }
    if d == 2 && j_max >= 3 {
        let quadrics = counts[&2] > 0 && counts.iter().all(|(&j, &c)| j == 2 || c == 0);
        let strict = h.get(2) < h.get(1);
        rec.record(checks::POLYGON_QUADRICS, quadrics == strict, || {
            format!("toric counts {counts:?} with h* {:?}", h.entries())
        });
    }
    if points <= suites.betti_max_points && p.is_full_dimensional() {
        if let Some(oracle) = capped(oracle::toric_counts_by_components(p, j_max))? {
            rec.record(checks::TORIC_ORACLE, oracle == counts, || {
                format!("ranks {counts:?}, components {oracle:?}")
            });
        }
    }
    rec.report.toric_generator_degrees = Some(counts);
    Ok(())
}

fn oracle_checks(
    rec: &mut CorpusRecord,
    p: &Polytope,
    h: &HStarVector,
    idp: &IdpResult,
    level: &LevelReport,
) -> Result<()> {
    if let Some(slow) = capped(oracle::h_star_by_box_scan(p))? {
        rec.record(checks::HSTAR_ORACLE, &slow == h, || {
            format!("fast {:?}, box scan {:?}", h.entries(), slow.entries())
        });
    }
    if let Some(slow) = capped(oracle::idp_by_compositions(p))? {
        rec.record(checks::IDP_ORACLE, slow == idp.value, || {
            format!("inductive {}, compositions {slow}", idp.value)
        });
    }
    if let Some(slow) = capped(oracle::level_by_definition(p))? {
        rec.record(checks::LEVEL_ORACLE, slow == level.generator_degrees, || {
            format!("fast {:?}, definition {slow:?}", level.generator_degrees)
        });
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub passed: usize,
    pub violated: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ArrowTally {
    pub evaluated: usize,
    pub premise_true: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WitnessTally {
    pub count: usize,
    pub first: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub config: CorpusConfig,
    pub candidates: usize,
    pub accepted: usize,
    pub rejected_degree: usize,
    pub rejected_other: usize,
    /// `"accepted/candidates"`.
    pub acceptance_rate: String,
    pub analysis_failures: Vec<String>,
    pub members: usize,
    pub degree_two: usize,
    /// Number of degree-2 members where each predicate holds.
    pub predicate_counts: BTreeMap<String, usize>,
    pub arrows: BTreeMap<String, ArrowTally>,
    pub non_implications: BTreeMap<String, WitnessTally>,
    pub checks: BTreeMap<String, CheckTally>,
    pub violations: usize,
    pub external_violations: usize,
    pub passed: bool,
}

/// Result of [`corpus_verify`]: records sorted by canonical vertex list, then
/// name.
#[derive(Clone, Debug)]
pub struct CorpusRun {
    pub records: Vec<CorpusRecord>,
    pub summary: Summary,
}

impl CorpusRun {
    pub fn violating(&self) -> impl Iterator<Item = &CorpusRecord> {
        self.records
            .iter()
            .filter(|r| r.violations.iter().any(|v| v.severity == Severity::Fatal))
    }
}

enum Candidate {
    Accepted { name: String, origin: &'static str, polytope: Polytope },
    RejectedDegree,
    RejectedOther,
}

fn candidate(config: &CorpusConfig, index: usize) -> Result<Candidate> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let dim = rng.random_range(config.dim_min..=config.dim_max);
    let subset = rng.random_range(0..100) < config.non_simplex_percent;
    let (origin, polytope) = if subset {
        let vs = (config.vertices_min, config.vertices_max);
        match random_point_subset_polytope(dim, config.entry_bound, vs, &mut rng)? {
            Some(p) => ("subset", p),
            None => return Ok(Candidate::RejectedOther),
        }
    } else {
        ("simplex", random_simplex(dim, config.entry_bound, &mut rng)?)
    };
    let h = match capped(h_star(&polytope))? {
        Some(h) => h,
        None => return Ok(Candidate::RejectedOther),
    };
    let s = h.degree();
    if config.degree_min.is_some_and(|m| s < m) || config.degree_max.is_some_and(|m| s > m) {
        return Ok(Candidate::RejectedDegree);
    }
    Ok(Candidate::Accepted {
        name: format!("{origin}-{index}"),
        origin,
        polytope,
    })
}

/// Generates the corpus described by `config`, analyzes every member and
/// aggregates the outcome. Identical configs give identical runs.
pub fn corpus_verify(config: &CorpusConfig) -> Result<CorpusRun> {
    if config.count > 0 && (config.dim_min == 0 || config.dim_min > config.dim_max) {
        return Err(Error::InvalidArgument(format!(
            "invalid dimension range {}..={}",
            config.dim_min, config.dim_max
        )));
    }
    const CHUNK: usize = 256;
    let budget = config.budget.unwrap_or(1000 * config.count + 1000);
    let mut accepted: Vec<(String, &'static str, Polytope)> = Vec::new();
    let (mut candidates, mut rejected_degree, mut rejected_other) = (0, 0, 0);
    let mut next = 0;
    while accepted.len() < config.count && next < budget {
        let end = (next + CHUNK).min(budget);
        let batch: Vec<Candidate> = (next..end)
            .into_par_iter()
            .map(|i| candidate(config, i))
            .collect::<Result<_>>()?;
        for c in batch {
            if accepted.len() == config.count {
                break;
            }
            candidates += 1;
            match c {
                Candidate::Accepted { name, origin, polytope } => accepted.push((name, origin, polytope)),
                Candidate::RejectedDegree => rejected_degree += 1,
                Candidate::RejectedOther => rejected_other += 1,
            }
        }
        next = end;
    }

    let mut jobs: Vec<(String, &'static str, Polytope, Option<ReferenceExample>)> = Vec::new();
    if config.reference_examples {
        for ex in reference_examples() {
            jobs.push((ex.name.to_string(), "reference", ex.polytope()?, Some(ex)));
        }
    }
    jobs.extend(accepted.into_iter().map(|(n, o, p)| (n, o, p, None)));

    let outcomes: Vec<std::result::Result<CorpusRecord, String>> = jobs
        .par_iter()
        .map(|(name, origin, p, ex)| {
            match analyze(name.clone(), origin, p, &config.suites) {
                Ok(mut rec) => {
                    if let Some(ex) = ex {
                        let mismatches = ex.mismatches(&rec);
                        let detail = mismatches.join("; ");
                        rec.record(checks::REFERENCE_GOLDENS, mismatches.is_empty(), || detail);
                    }
                    Ok(Ok(rec))
                }
                Err(Error::CapExceeded(msg)) => Ok(Err(format!("{name}: {msg}"))),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut analysis_failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(msg) => analysis_failures.push(msg),
        }
    }
    records.sort_by(|a, b| {
        (&a.report.vertices, &a.report.name).cmp(&(&b.report.vertices, &b.report.name))
    });

    let summary = summarize(
        config,
        &records,
        (candidates, rejected_degree, rejected_other),
        analysis_failures,
    );
    Ok(CorpusRun { records, summary })
}

fn summarize(
    config: &CorpusConfig,
    records: &[CorpusRecord],
    (candidates, rejected_degree, rejected_other): (usize, usize, usize),
    analysis_failures: Vec<String>,
) -> Summary {
    let mut predicate_counts: BTreeMap<String, usize> =
        "ABCDEF".chars().map(|c| (c.to_string(), 0)).collect();
    let mut arrows: BTreeMap<String, ArrowTally> = ARROWS
        .iter()
        .map(|&(a, b)| (arrow_label(a, b), ArrowTally::default()))
        .collect();
    let mut non_implications: BTreeMap<String, WitnessTally> = NON_IMPLICATIONS
        .iter()
        .map(|(p, c)| (non_implication_label(p, *c), WitnessTally::default()))
        .collect();
    let mut check_tallies: BTreeMap<String, CheckTally> = BTreeMap::new();
    let mut degree_two = 0;
    let (mut violations, mut external) = (0, 0);
    for r in records {
        let imp = r.implications();
        if imp.degree_two {
            degree_two += 1;
            for c in "ABCDEF".chars() {
                if imp.predicates.get(c) {
                    *predicate_counts.get_mut(&c.to_string()).unwrap() += 1;
                }
            }
            for (label, outcome) in &imp.arrows {
                let t = arrows.get_mut(label).unwrap();
                t.evaluated += 1;
                match outcome {
                    ArrowOutcome::Holds => t.premise_true += 1,
                    ArrowOutcome::Violated => {
                        t.premise_true += 1;
                        t.violations += 1;
                    }
                    _ => {}
                }
            }
            for w in &imp.witnesses {
                let t = non_implications.get_mut(w).unwrap();
                t.count += 1;
                if t.first.is_none() {
                    t.first = r.report.name.clone();
                }
            }
        }
        for (name, outcome) in &r.checks {
            let t = check_tallies.entry(name.to_string()).or_default();
            match outcome {
                Outcome::Pass => t.passed += 1,
                Outcome::Violated => t.violated += 1,
                Outcome::Skipped => t.skipped += 1,
            }
        }
        for v in &r.violations {
            match v.severity {
                Severity::Fatal => violations += 1,
                Severity::External => external += 1,
            }
        }
    }
    Summary {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        candidates,
        accepted: candidates - rejected_degree - rejected_other,
        rejected_degree,
        rejected_other,
        acceptance_rate: format!("{}/{}", candidates - rejected_degree - rejected_other, candidates),
        analysis_failures,
        members: records.len(),
        degree_two,
        predicate_counts,
        arrows,
        non_implications,
        checks: check_tallies,
        violations,
        external_violations: external,
        passed: violations == 0,
    }
}

/// One JSON object per line, in record order.
pub fn jsonl(records: &[CorpusRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Canonical text of a record's polytope, for reproducing a finding.
pub fn reproduction(record: &CorpusRecord) -> String {
    PolytopeFile::from_polytope(record.report.name.clone(), &record.polytope).to_text()
}

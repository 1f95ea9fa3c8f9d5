//! The JSON invariant report shared by the command line and the corpus stream.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::dilates::Dilates;
use crate::ehrhart::{h_star, HStarVector};
use crate::graded::{toric_generator_counts, GradedBettiCell, Koszul};
use crate::harness::{implication_report_from, ImplicationReport};
use crate::io::exact;
use crate::monoid::{
    generator_degree_bound, generator_profile_up_to, is_idp_with, is_level_with,
    spanning_report_with, GeneratorProfile, IdpResult, LevelReport, SublatticeReport,
};
use crate::polytope::{Point, Polytope};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient: usize,
    pub dim: usize,
    #[serde(serialize_with = "exact::matrix")]
    pub vertices: Vec<Vec<BigInt>>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub ehrhart: Option<EhrhartSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idp: Option<IdpSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators_by_degree: Option<BTreeMap<usize, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spanning: Option<SpanningSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<LevelSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<GradedBettiCell>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toric_generator_degrees: Option<BTreeMap<usize, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implications: Option<ImplicationReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EhrhartSection {
    #[serde(serialize_with = "exact::vec")]
    pub hstar: Vec<u64>,
    pub degree: usize,
    pub codegree: usize,
    #[serde(serialize_with = "exact::int")]
    pub volume: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdpSection {
    pub value: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub degree: usize,
    pub point: Point,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpanningSection {
    pub value: bool,
    #[serde(serialize_with = "exact::int")]
    pub q: BigInt,
    pub full_dimensional: bool,
    #[serde(serialize_with = "exact::vec")]
    pub h_tilde: Vec<u64>,
    pub deg_tilde: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSection {
    pub value: bool,
    pub generator_degrees: Vec<usize>,
}

/// Which sections [`Report::compute`] fills in.
#[derive(Clone, Debug, Default)]
pub struct Selection {
    pub hstar: bool,
    pub idp: bool,
    pub generators: bool,
    pub spanning: bool,
    pub level: bool,
    /// `(p_max, j_max)`.
    pub betti: Option<(usize, usize)>,
    pub toric: Option<usize>,
    pub implications: bool,
}

impl Selection {
    pub fn all() -> Self {
        Selection {
            hstar: true,
            idp: true,
            generators: true,
            spanning: true,
            level: true,
            betti: None,
            toric: None,
            implications: true,
        }
    }
}

impl EhrhartSection {
    pub fn new(h: &HStarVector) -> Self {
        EhrhartSection {
            hstar: h.entries().to_vec(),
            degree: h.degree(),
            codegree: h.codegree(),
            volume: h.normalized_volume(),
        }
    }
}

impl IdpSection {
    pub fn new(r: &IdpResult) -> Self {
        IdpSection {
            value: r.value,
            witness: r.witness.clone().map(|(degree, point)| Witness { degree, point }),
        }
    }
}

impl SpanningSection {
    pub fn new(s: &SublatticeReport) -> Self {
        SpanningSection {
            value: s.is_spanning,
            q: s.q.clone(),
            full_dimensional: s.full_dimensional,
            h_tilde: s.h_tilde.entries().to_vec(),
            deg_tilde: s.deg_tilde(),
        }
    }
}

impl LevelSection {
    pub fn new(l: &LevelReport) -> Self {
        LevelSection {
            value: l.is_level,
            generator_degrees: l.generator_degrees.clone(),
        }
    }
}

impl Report {
    /// A report with only the geometric fields set.
    pub fn bare(name: Option<String>, p: &Polytope) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            name,
            ambient: p.ambient_dim(),
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
            ehrhart: None,
            idp: None,
            generators_by_degree: None,
            spanning: None,
            level: None,
            betti: None,
            toric_generator_degrees: None,
            implications: None,
        }
    }

    pub fn compute(name: Option<String>, p: &Polytope, sel: &Selection) -> Result<Report> {
        let mut report = Report::bare(name, p);
        let needs_h = sel.hstar || sel.idp || sel.generators || sel.spanning || sel.level || sel.implications;
        if !needs_h && sel.betti.is_none() && sel.toric.is_none() {
            return Ok(report);
        }
        let h = h_star(p)?;
        let mut dil = Dilates::new(p);
        if sel.hstar {
            report.ehrhart = Some(EhrhartSection::new(&h));
        }
        let mut idp: Option<IdpResult> = None;
        if sel.idp || sel.implications {
            let r = is_idp_with(&h, &mut dil)?;
            report.idp = sel.idp.then(|| IdpSection::new(&r));
            idp = Some(r);
        }
        let mut profile: Option<GeneratorProfile> = None;
        if sel.generators || sel.level || sel.implications {
            let g = generator_profile_up_to(generator_degree_bound(&h), &mut dil)?;
            if sel.generators {
                report.generators_by_degree = Some(g.counts.clone());
            }
            profile = Some(g);
        }
        let mut spanning: Option<SublatticeReport> = None;
        if sel.spanning || sel.implications {
            let s = spanning_report_with(&h, &mut dil)?;
            report.spanning = sel.spanning.then(|| SpanningSection::new(&s));
            spanning = Some(s);
        }
        let mut level: Option<LevelReport> = None;
        if sel.level || sel.implications {
            let l = is_level_with(&h, profile.as_ref().unwrap(), &mut dil)?;
            report.level = sel.level.then(|| LevelSection::new(&l));
            level = Some(l);
        }
        if sel.implications {
            report.implications = Some(implication_report_from(
                &h,
                idp.as_ref().unwrap(),
                spanning.as_ref().unwrap(),
                level.as_ref().unwrap(),
            ));
        }
        if let Some((p_max, j_max)) = sel.betti {
            report.betti = Some(Koszul::new(p)?.table(p_max, j_max)?);
        }
        if let Some(j_max) = sel.toric {
            report.toric_generator_degrees = Some(toric_generator_counts(p, j_max)?);
        }
        Ok(report)
    }
}

//! JSON file formats.
//!
//! Rationals are strings in canonical reduced form (`79/160`, `-1/2`, `2`).
//! Request and server indices are 1-based in every file; the library uses
//! 0-based indices internally and the shift happens in this module.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use ofal_core::adversary::{GeneratorKind, GeneratorMeta};
use ofal_core::rational::parse_rational;
use ofal_core::{Instance, Matching, Rational, RatioReport, RequestSequence, Trace};

fn parse_field(value: &str, what: &str) -> Result<Rational> {
    parse_rational(value).with_context(|| format!("bad {what}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub servers: Vec<String>,
    pub capacities: Vec<u32>,
}

impl InstanceFile {
    pub fn new(instance: &Instance) -> Self {
        InstanceFile {
            servers: instance.servers().iter().map(ToString::to_string).collect(),
            capacities: instance.capacities().to_vec(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let servers = self
            .servers
            .iter()
            .map(|s| parse_field(s, "server position"))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(servers, self.capacities.clone()).context("invalid instance")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMetaFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<String>,
}

impl GeneratorMetaFile {
    pub fn from_meta(meta: &GeneratorMeta) -> Self {
        GeneratorMetaFile {
            kind: meta.kind.to_string(),
            k: meta.k,
            ell: meta.ell,
            eps: meta.eps.as_ref().map(ToString::to_string),
            n: meta.n,
            seed: meta.seed,
            lo: meta.lo.as_ref().map(ToString::to_string),
            hi: meta.hi.as_ref().map(ToString::to_string),
        }
    }

    pub fn to_meta(&self) -> Result<GeneratorMeta> {
        let kind: GeneratorKind = match self.kind.parse() {
            Ok(kind) => kind,
            Err(e) => bail!("bad generator metadata: {e}"),
        };
        Ok(GeneratorMeta {
            kind,
            k: self.k,
            ell: self.ell,
            eps: self
                .eps
                .as_deref()
                .map(|s| parse_field(s, "generator eps"))
                .transpose()?,
            n: self.n,
            seed: self.seed,
            lo: self
                .lo
                .as_deref()
                .map(|s| parse_field(s, "generator lo"))
                .transpose()?,
            hi: self
                .hi
                .as_deref()
                .map(|s| parse_field(s, "generator hi"))
                .transpose()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub requests: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorMetaFile>,
}

impl SequenceFile {
    pub fn new(requests: &RequestSequence, meta: Option<&GeneratorMeta>) -> Self {
        SequenceFile {
            requests: requests.iter().map(ToString::to_string).collect(),
            generator: meta.map(GeneratorMetaFile::from_meta),
        }
    }

    pub fn to_requests(&self) -> Result<RequestSequence> {
        self.requests
            .iter()
            .map(|s| parse_field(s, "request position"))
            .collect::<Result<Vec<_>>>()
            .map(RequestSequence::from)
    }
}

/// (request, server) pairs, both 1-based here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingFile {
    pub pairs: Vec<(usize, usize)>,
}

impl MatchingFile {
    pub fn from_matching(matching: &Matching) -> Self {
        MatchingFile {
            pairs: matching.pairs().iter().map(|&(r, s)| (r + 1, s + 1)).collect(),
        }
    }

    pub fn to_matching(&self) -> Result<Matching> {
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for &(r, s) in &self.pairs {
            if r == 0 || s == 0 {
                bail!("matching indices are 1-based, got ({r}, {s})");
            }
            pairs.push((r - 1, s - 1));
        }
        Ok(Matching::from_pairs(pairs))
    }
}

/// One assignment in a trace file. Indices are 1-based and `total` is the
/// running cost through this step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStepFile {
    pub request: usize,
    pub server: usize,
    pub cost: String,
    pub total: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub algorithm: String,
    pub steps: Vec<TraceStepFile>,
    pub total: String,
}

impl TraceFile {
    pub fn new(algorithm: &str, trace: &Trace) -> Self {
        let mut steps = Vec::with_capacity(trace.steps().len());
        let mut running: Option<Rational> = None;
        for step in trace.steps() {
            let total = match running {
                Some(t) => t + &step.cost,
                None => step.cost.clone(),
            };
            steps.push(TraceStepFile {
                request: step.request + 1,
                server: step.server + 1,
                cost: step.cost.to_string(),
                total: total.to_string(),
            });
            running = Some(total);
        }
        TraceFile {
            algorithm: algorithm.to_string(),
            steps,
            total: trace.total().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReportFile {
    pub k: usize,
    pub ell: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorMetaFile>,
    pub algorithm: String,
    pub alg_total: String,
    pub opt_total: String,
    /// Exact ratio, or `inf`.
    pub ratio: String,
    /// Display only; never used in comparisons.
    pub ratio_decimal: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl RatioReportFile {
    pub fn new(report: &RatioReport) -> Self {
        RatioReportFile {
            k: report.k,
            ell: report.ell,
            generator: report.generator.as_ref().map(GeneratorMetaFile::from_meta),
            algorithm: report.algorithm.to_string(),
            alg_total: report.alg_total.to_string(),
            opt_total: report.opt_total.to_string(),
            ratio: report.ratio.to_string(),
            ratio_decimal: report.ratio_decimal(),
            bound: report.bound.as_ref().map(|b| b.bound.to_string()),
            pass: report.bound.as_ref().map(|b| b.pass),
        }
    }
}

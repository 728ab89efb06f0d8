//! The JSON job document and its conversion into a chart.

use std::collections::BTreeMap;
use std::sync::Arc;

use hironaka::blowup_engine::ChartState;
use hironaka::cjs_driver::{LabelMode, OriginalSpec, ResolveOptions};
use hironaka::exact_algebra::{var_list, FieldKind};
use hironaka::invariant::IotaOptions;
use hironaka::local_frame::{BoundaryComponent, Frame, Status};
use hironaka::{Error, Field, Polynomial, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    pub frame: FrameSpec,
    #[serde(default)]
    pub boundary: Vec<BoundarySpec>,
    /// Center of a blow-up as a list of variables; the closed point when omitted.
    #[serde(default)]
    pub center: Option<Vec<String>>,
    /// Restricts a blow-up to one chart.
    #[serde(default)]
    pub chart_var: Option<String>,
    #[serde(default)]
    pub point: Option<PointSpec>,
    /// Stratum components C used by the invariant instead of the computed maximal stratum.
    #[serde(default)]
    pub components: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub options: JobOptions,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub kind: FieldKind,
    #[serde(default)]
    pub characteristic: u64,
    /// Name of t in 𝔽p(t), or of the generator of a finite extension.
    #[serde(default)]
    pub transcendental: Option<String>,
    /// Minimal polynomial of the generator of a finite extension, in the generator name.
    #[serde(default)]
    pub modulus: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub u: Vec<String>,
    pub y: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub generator: String,
    pub status: Status,
    #[serde(default)]
    pub birth: u32,
}

/// A point above the center to move to the origin of the chart.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    /// Rational coordinates: variable name to field element.
    #[serde(default)]
    pub assign: BTreeMap<String, String>,
    /// A closed point with residue field 𝔽p[a]/(minpoly(var)), over prime fields only.
    #[serde(default)]
    pub extension: Option<ExtensionSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub var: String,
    pub minpoly: String,
    pub name: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    pub prepare_budget: Option<usize>,
    pub sigma_budget: Option<usize>,
    pub side: Option<u8>,
    pub max_steps: Option<u32>,
    pub max_events: Option<usize>,
    #[serde(default)]
    pub labelling: LabelMode,
    #[serde(default)]
    pub original: OriginalSpec,
}

impl JobOptions {
    pub fn resolve_options(&self) -> ResolveOptions {
        let d = ResolveOptions::default();
        let di = IotaOptions::default();
        ResolveOptions {
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            max_events: self.max_events.unwrap_or(d.max_events),
            labelling: self.labelling,
            original: self.original.clone(),
            iota: IotaOptions {
                prepare_budget: self.prepare_budget.unwrap_or(di.prepare_budget),
                sigma_budget: self.sigma_budget.unwrap_or(di.sigma_budget),
                side: self.side,
            },
        }
    }
}

fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {}", path, m)),
        other => other,
    })
}

impl Job {
    pub fn vars(&self) -> Arc<Vec<String>> {
        let v: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        var_list(&v)
    }

    pub fn parse_poly<K: Field>(&self, ctx: &K::Ctx, path: &str, text: &str) -> Result<Polynomial<K>> {
        at(path, Polynomial::parse(ctx, &self.vars(), text))
    }

    /// Parses a field element written as a constant expression.
    pub fn parse_scalar<K: Field>(&self, ctx: &K::Ctx, path: &str, text: &str) -> Result<K> {
        at(path, Polynomial::<K>::parse_scalar(ctx, text))
    }

    pub fn chart<K: Field>(&self, ctx: &K::Ctx) -> Result<ChartState<K>> {
        if self.variables.is_empty() {
            return Err(Error::Input("variables: at least one variable is required".into()));
        }
        if self.generators.is_empty() {
            return Err(Error::Input("generators: at least one generator is required".into()));
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| self.parse_poly(ctx, &format!("generators[{}]", i), g))
            .collect::<Result<Vec<_>>>()?;
        let boundary = self
            .boundary
            .iter()
            .enumerate()
            .map(|(i, b)| Ok(BoundaryComponent::new(self.parse_poly(ctx, &format!("boundary[{}].generator", i), &b.generator)?, b.status, b.birth)))
            .collect::<Result<Vec<_>>>()?;
        let frame = Frame { u: self.frame.u.clone(), y: self.frame.y.clone(), boundary };
        at("frame", ChartState::root(gens, frame))
    }
}

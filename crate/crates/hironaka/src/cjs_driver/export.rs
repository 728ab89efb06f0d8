//! Serializable form of a resolution trace and its DOT rendering.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{ChildRecord, ResolutionTrace, TraceEvent, TraceStatus};
use crate::blowup_engine::Component;
use crate::exact_algebra::{Field, FieldDescriptor};
use crate::invariant::IotaInvariant;
use crate::local_frame::Status;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDoc {
    pub generator: String,
    pub status: Status,
    pub birth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDoc {
    pub id: usize,
    pub parent: Option<usize>,
    pub step: u32,
    pub center: Option<String>,
    pub chart_var: Option<String>,
    /// Translations (variable, replacement) moving the tracked point to the origin.
    pub translations: Vec<(String, String)>,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    pub u: Vec<String>,
    pub y: Vec<String>,
    pub boundary: Vec<BoundaryDoc>,
    pub components: Vec<Component>,
    pub residue_degree: usize,
    pub iota: Option<IotaInvariant>,
    pub terminal: bool,
    pub note: Option<String>,
}

pub type ChildDoc = ChildRecord;
pub type EventDoc = TraceEvent;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub field: FieldDescriptor,
    pub status: TraceStatus,
    pub message: Option<String>,
    pub charts: Vec<ChartDoc>,
    pub events: Vec<EventDoc>,
}

impl<K: Field> ResolutionTrace<K> {
    pub fn to_doc(&self) -> TraceDoc {
        let ctx = self.charts[0].state.ctx().clone();
        let charts = self
            .charts
            .iter()
            .map(|tc| {
                let s = &tc.state;
                let l = s.lineage.as_ref();
                ChartDoc {
                    id: s.id,
                    parent: l.map(|l| l.parent),
                    step: s.step,
                    center: l.map(|l| l.center.to_string()),
                    chart_var: l.map(|l| l.chart_var.clone()),
                    translations: l.map(|l| l.translations.clone()).unwrap_or_default(),
                    variables: s.vars().to_vec(),
                    generators: s.generator_strings(),
                    u: s.frame.u.clone(),
                    y: s.frame.y.clone(),
                    boundary: s.frame.boundary.iter().map(|b| BoundaryDoc { generator: b.generator.to_string(), status: b.status, birth: b.birth }).collect(),
                    components: s.components.clone(),
                    residue_degree: s.residue_degree,
                    iota: tc.iota.clone(),
                    terminal: tc.terminal,
                    note: tc.note.clone(),
                }
            })
            .collect();
        TraceDoc { field: K::descriptor(&ctx), status: self.status, message: self.message.clone(), charts, events: self.events.clone() }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn iota_text(i: &IotaInvariant) -> String {
    let hs = |v: &[u32]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
    let c = &i.iotac;
    let chs = c.hs.as_ref().map_or("-".to_string(), |h| format!("({})", hs(&h.0)));
    let p = &i.iotapoly.0;
    format!(
        "case {:?}  i0=(({}),{},{},{})  ic=({},{},{},{},{},{})  ipoly=({},{},{},{})",
        i.case, hs(&i.iota0.hs.0), i.iota0.old, i.iota0.e, i.iota0.eo, chs, c.old, c.e, c.eo, c.delta, c.delta_o, p[0], p[1], p[2], p[3]
    )
}

/// DOT graph: one node per chart (generators and ι), one edge per tracked child labelled with
/// the center and chart variable.
pub fn to_dot(doc: &TraceDoc) -> String {
    let mut out = String::new();
    writeln!(out, "digraph resolution {{").expect("write");
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").expect("write");
    for c in &doc.charts {
        let mut label = format!("#{}  step {}\\n{}", c.id, c.step, escape(&c.generators.join(", ")));
        if let Some(i) = &c.iota {
            label.push_str("\\n");
            label.push_str(&escape(&iota_text(i)));
        }
        if c.terminal {
            label.push_str("\\nresolved");
        }
        writeln!(out, "  c{} [label=\"{}\"];", c.id, label).expect("write");
    }
    for e in &doc.events {
        for ch in &e.children {
            let mut label = format!("{} / {}", e.center, ch.chart_var);
            if let Some(t) = doc.charts.get(ch.chart).filter(|c| !c.translations.is_empty()) {
                let tr: Vec<String> = t.translations.iter().map(|(v, r)| format!("{}:={}", v, r)).collect();
                label.push_str(&format!(" [{}]", tr.join(", ")));
            }
            writeln!(out, "  c{} -> c{} [label=\"{}\"];", e.parent, ch.chart, escape(&label)).expect("write");
        }
    }
    writeln!(out, "}}").expect("write");
    out
}

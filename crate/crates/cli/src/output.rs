//! Report envelopes and the flat CSV renderings.
//!
//! Every JSON report is `{"schema": "qclab-v1", "command": ..., "config":
//! ..., "report": ...}` with the parsed configuration echoed for
//! provenance. CSV output opens with the versioned comment line
//! `# qclab-v1 <subcommand>`.

use qclab_core::analysis::{GreedyReport, GrowthSeries, IndependenceReport, UcCheckReport, VanishReport};
use qclab_core::brooks::DefectReport;
use qclab_core::exact::NormValue;
use qclab_core::spaces::{MatrixRep, Vector};

#[derive(serde::Serialize)]
pub struct EvalReport {
    pub vector: Vector,
    pub norm: NormValue,
    pub norm_decimal: f64,
    pub support_size: usize,
}

#[derive(serde::Serialize)]
pub struct U2Probe {
    pub word: qclab_core::words::ReducedWord,
    pub angles: Vec<f64>,
    pub angle_ratio: f64,
    pub gap: f64,
}

#[derive(serde::Serialize)]
pub struct U2Report {
    pub rep: MatrixRep,
    pub denominator_bound: u32,
    pub probes: Vec<U2Probe>,
}

pub enum Report {
    Eval(EvalReport),
    Defect(DefectReport),
    Growth(GrowthSeries),
    Vanish(VanishReport),
    Independence(IndependenceReport),
    Greedy(GreedyReport),
    Ucheck(UcCheckReport),
    U2(U2Report),
}

impl Report {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Report::Eval(r) => serde_json::to_value(r),
            Report::Defect(r) => serde_json::to_value(r),
            Report::Growth(r) => serde_json::to_value(r),
            Report::Vanish(r) => serde_json::to_value(r),
            Report::Independence(r) => serde_json::to_value(r),
            Report::Greedy(r) => serde_json::to_value(r),
            Report::Ucheck(r) => serde_json::to_value(r),
            Report::U2(r) => serde_json::to_value(r),
        }
        .expect("reports serialize")
    }
}

pub fn norm_exact_str(n: &NormValue) -> String {
    match n {
        NormValue::Exact { pow, .. } if n.is_zero() => {
            let _ = pow;
            "0".to_string()
        }
        NormValue::Exact { pow, p: 1 } => qclab_core::exact::rational_str(pow),
        NormValue::Exact { pow, p } => {
            format!("({})^(1/{p})", qclab_core::exact::rational_str(pow))
        }
        NormValue::Approx(_) => String::new(),
    }
}

fn esc(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn row(fields: &[String]) -> String {
    fields.iter().map(|f| esc(f)).collect::<Vec<_>>().join(",")
}

pub fn to_csv(command: &str, report: &Report) -> String {
    let mut lines = vec![format!("# qclab-v1 {command}")];
    match report {
        Report::Eval(r) => {
            lines.push("key,value".into());
            match &r.vector {
                Vector::Scalar(c) => {
                    lines.push(row(&["value".into(), qclab_core::exact::rational_str(c)]));
                }
                Vector::Group(v) => {
                    for (g, c) in v.iter() {
                        let key = if g.is_identity() { "1".to_string() } else { g.render() };
                        lines.push(row(&[key, qclab_core::exact::rational_str(c)]));
                    }
                }
                Vector::Complex(v) => {
                    for (i, c) in v.iter().enumerate() {
                        lines.push(row(&[format!("{i}"), format!("{}+{}i", c.re, c.im)]));
                    }
                }
            }
            lines.push(row(&["norm".into(), format!("{}", r.norm_decimal)]));
        }
        Report::Defect(r) => {
            lines.push("observed_decimal,observed_exact,witness_g,witness_g2,bound_decimal,within_bound".into());
            lines.push(row(&[
                format!("{}", r.observed_decimal),
                norm_exact_str(&r.observed),
                r.witness.0.render(),
                r.witness.1.render(),
                r.bound.as_ref().map(|b| format!("{}", b.to_f64())).unwrap_or_default(),
                r.within_bound().map(|b| b.to_string()).unwrap_or_default(),
            ]));
        }
        Report::Growth(r) => {
            lines.push("n,norm_decimal,norm_exact,coordinate,certified_bound,exceeded".into());
            for p in &r.points {
                lines.push(row(&[
                    p.n.to_string(),
                    format!("{}", p.norm_decimal),
                    norm_exact_str(&p.norm),
                    p.coordinate.clone().unwrap_or_default(),
                    r.certified_bound.map(|b| format!("{b}")).unwrap_or_default(),
                    r.exceeded.contains(&p.n).to_string(),
                ]));
            }
        }
        Report::Vanish(r) => {
            lines.push("max_norm_decimal,max_norm_exact,exact_zero,witness,checked,samples,maxlen,seed".into());
            lines.push(row(&[
                format!("{}", r.max_norm_decimal),
                norm_exact_str(&r.max_norm),
                r.exact_zero.to_string(),
                r.witness.as_ref().map(|w| w.render()).unwrap_or_default(),
                r.checked.to_string(),
                r.samples.to_string(),
                r.maxlen.to_string(),
                r.seed.to_string(),
            ]));
        }
        Report::Independence(r) => {
            lines.push("pattern,witness,norm_decimal,norm_exact".into());
            for (i, pattern) in r.patterns.iter().enumerate() {
                for (j, witness) in r.witnesses.iter().enumerate() {
                    let value = &r.matrix[i][j];
                    lines.push(row(&[
                        pattern.render(),
                        witness.render(),
                        format!("{}", value.to_f64()),
                        norm_exact_str(value),
                    ]));
                }
            }
        }
        Report::Greedy(r) => {
            lines.push("n,y,admissible,certified,pre_norm,post_norm,eps,mu,r".into());
            for s in &r.steps {
                lines.push(row(&[
                    s.n.to_string(),
                    s.y.render(),
                    s.admissible.to_string(),
                    s.certified.to_string(),
                    format!("{}", s.pre_norm),
                    format!("{}", s.post_norm),
                    s.eps.clone(),
                    s.mu.clone(),
                    s.r.clone(),
                ]));
            }
        }
        Report::Ucheck(r) => {
            lines.push("trials,counted,filtered_out,conclusion_violations,constraint_violations,violations_total,worst_margin".into());
            lines.push(row(&[
                r.trials.to_string(),
                r.counted.to_string(),
                r.filtered_out.to_string(),
                r.conclusion_violations.to_string(),
                r.constraint_violations.to_string(),
                r.violations_total.to_string(),
                format!("{}", r.worst_margin),
            ]));
        }
        Report::U2(r) => {
            lines.push("word,t,s,ratio,gap".into());
            for p in &r.probes {
                lines.push(row(&[
                    p.word.render(),
                    format!("{}", p.angles[0]),
                    format!("{}", p.angles.get(1).copied().unwrap_or(p.angles[0])),
                    format!("{}", p.angle_ratio),
                    format!("{}", p.gap),
                ]));
            }
        }
    }
    lines.push(String::new());
    lines.join("\n")
}

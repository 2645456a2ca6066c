//! Subcommand implementations. Each returns the complete output text.
//!
//! JSON outputs use the field names `stage`, `direction`, `window`, `k_min`,
//! `dims`, `method` and `value` wherever those quantities appear.

use std::fmt::Write;

use gkdim::analysis::{equivalence_check, gk_estimate, EquivalenceReport, GkEstimate, Window};
use gkdim::arith::Field;
use gkdim::closure::{
    cayley_hamilton_check, enumerate_products, ex_big_build, regular_rep_charpoly, trace_algebra_generators,
    CayleyHamilton,
};
use gkdim::growth::{growth_sequence, GrowthOptions};
use gkdim::pipeline::{run_pipeline, PipelineConfig};
use gkdim::presentation::{AlgebraPresentation, RingKind};
use serde::Serialize;

use crate::document::{Loaded, PresentationDocument};
use crate::{with_presentation, CliError, Format, RunConfig};

type Out = Result<String, CliError>;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn dims_csv(dims: &[usize]) -> String {
    let mut s = String::from("n,dim\n");
    for (n, d) in dims.iter().enumerate() {
        writeln!(s, "{n},{d}").unwrap();
    }
    s
}

fn options(config: &RunConfig) -> GrowthOptions {
    GrowthOptions {
        max_n: config.max_n,
        cap: config.cap,
        workers: config.workers,
    }
}

fn dims_of<C: RingKind>(p: &AlgebraPresentation<C>, config: &RunConfig) -> Result<Vec<usize>, CliError> {
    Ok(growth_sequence(p, &options(config))?.dims().to_vec())
}

#[derive(Serialize)]
struct GrowthOut<'a> {
    label: &'a str,
    ring: String,
    dims: &'a [usize],
    stabilized_at: Option<usize>,
}

pub fn growth(doc: &PresentationDocument, config: &RunConfig) -> Out {
    with_presentation!(doc.load()?, p => {
        let table = growth_sequence(&p, &options(config))?;
        Ok(match config.format {
            Format::Csv => dims_csv(table.dims()),
            Format::Json => json(&GrowthOut {
                label: &p.label,
                ring: p.coefficient_ring().describe(),
                dims: table.dims(),
                stabilized_at: table.stabilized_at(),
            }),
        })
    })
}

#[derive(Serialize)]
struct EstimateOut<'a> {
    label: &'a str,
    dims: &'a [usize],
    #[serde(flatten)]
    estimate: &'a GkEstimate,
}

fn estimate_csv(e: &GkEstimate) -> String {
    format!("method,value,window\n{},{},{}:{}\n", e.method, e.value_text(), e.window.lo(), e.window.hi())
}

pub fn gkdim(doc: &PresentationDocument, config: &RunConfig) -> Out {
    let (label, dims) = with_presentation!(doc.load()?, p => (p.label.clone(), dims_of(&p, config)?));
    let e = gk_estimate(&dims, config.window)?;
    Ok(match config.format {
        Format::Csv => estimate_csv(&e),
        Format::Json => json(&EstimateOut {
            label: &label,
            dims: &dims,
            estimate: &e,
        }),
    })
}

fn equivalence_csv(r: &EquivalenceReport) -> String {
    let mut s = String::from("direction,window,k_min\n");
    for d in [&r.forward, &r.backward] {
        writeln!(s, "{},{}:{},{}", d.direction, d.window.lo(), d.window.hi(), d.k_min).unwrap();
    }
    s
}

pub fn compare(a: &PresentationDocument, b: &PresentationDocument, config: &RunConfig) -> Out {
    let (la, da) = with_presentation!(a.load()?, p => (p.label.clone(), dims_of(&p, config)?));
    let (lb, db) = with_presentation!(b.load()?, p => (p.label.clone(), dims_of(&p, config)?));
    let (la, lb) = if la == lb { (format!("{la}#1"), format!("{lb}#2")) } else { (la, lb) };
    let window = config.window.unwrap_or(Window(1, config.max_n));
    let report = equivalence_check(&da, &db, window, (&la, &lb))?;
    Ok(match config.format {
        Format::Csv => equivalence_csv(&report),
        Format::Json => json(&report),
    })
}

#[derive(Serialize)]
struct ClosureOut {
    label: String,
    word_length: usize,
    words_examined: usize,
    t_generators: Vec<String>,
    dims: Vec<usize>,
    #[serde(flatten)]
    estimate: GkEstimate,
}

fn closure_report<C: RingKind>(p: &AlgebraPresentation<C>, word_length: usize, config: &RunConfig) -> Result<ClosureOut, CliError> {
    let tr = trace_algebra_generators(p, word_length, config.word_cap, config.workers)?;
    let dims = dims_of(&tr.closure, config)?;
    let estimate = gk_estimate(&dims, config.window)?;
    Ok(ClosureOut {
        label: tr.closure.label.clone(),
        word_length,
        words_examined: tr.words_examined,
        t_generators: tr.t_generators.iter().map(|t| t.format(&p.ring)).collect(),
        dims,
        estimate,
    })
}

fn closure_output(out: &ClosureOut, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("index,t_generator\n");
            for (i, t) in out.t_generators.iter().enumerate() {
                writeln!(s, "{i},{t}").unwrap();
            }
            s
        }
        Format::Json => json(out),
    }
}


pub fn charclosure(doc: &PresentationDocument, config: &RunConfig) -> Out {
    with_presentation!(doc.load()?, p => {
        let len = config.word_len.unwrap_or(p.size * p.size);
        Ok(closure_output(&closure_report(&p, len, config)?, config.format))
    })
}

pub fn exbig(m: usize, config: &RunConfig) -> Out {
    let p = ex_big_build(m)?;
    Ok(closure_output(&closure_report(&p, config.word_len.unwrap_or(1), config)?, config.format))
}

#[derive(Serialize)]
struct CayleyRow {
    word: String,
    cayley_hamilton: &'static str,
    regular_rep: &'static str,
}

#[derive(Serialize)]
struct CayleyOut {
    label: String,
    rows: Vec<CayleyRow>,
    summary: String,
}

/// Checks every generator and every product of two generators.
fn cayley_report<C: RingKind>(p: &AlgebraPresentation<C>, config: &RunConfig) -> Result<CayleyOut, CliError> {
    let words = enumerate_products(&p.generators, 2, config.word_cap)?;
    let rows: Vec<CayleyRow> = words
        .iter()
        .map(|(w, m)| CayleyRow {
            word: w.iter().map(|i| format!("g{i}")).collect::<Vec<_>>().join(" "),
            cayley_hamilton: match cayley_hamilton_check(m, &p.ring) {
                CayleyHamilton::Zero => "Zero",
                CayleyHamilton::NonZero(_) => "NonZero",
            },
            regular_rep: if regular_rep_charpoly(m, &p.ring).is_ok() { "Zero" } else { "NonZero" },
        })
        .collect();
    let bad = rows
        .iter()
        .filter(|r| r.cayley_hamilton != "Zero" || r.regular_rep != "Zero")
        .count();
    let summary = if bad == 0 {
        "all checks Zero".to_string()
    } else {
        format!("{bad} of {} words fail", rows.len())
    };
    Ok(CayleyOut {
        label: p.label.clone(),
        rows,
        summary,
    })
}

pub fn cayley(doc: &PresentationDocument, config: &RunConfig) -> Out {
    let out = with_presentation!(doc.load()?, p => cayley_report(&p, config)?);
    Ok(match config.format {
        Format::Csv => {
            let mut s = String::from("word,cayley_hamilton,regular_rep\n");
            for r in &out.rows {
                writeln!(s, "{},{},{}", r.word, r.cayley_hamilton, r.regular_rep).unwrap();
            }
            writeln!(s, "# {}", out.summary).unwrap();
            s
        }
        Format::Json => json(&out),
    })
}

fn pipeline_config(config: &RunConfig) -> PipelineConfig {
    let default = PipelineConfig::default();
    let window = config
        .window
        .unwrap_or(Window(default.window.lo().min(config.max_n), config.max_n));
    PipelineConfig {
        max_n: config.max_n,
        window,
        word_len: config.word_len,
        seed: config.seed,
        workers: config.workers,
        cap: config.cap,
        word_cap: config.word_cap,
        ..default
    }
}

fn pipeline_output<F: Field + RingKind>(p: &AlgebraPresentation<F>, config: &RunConfig) -> Out {
    let run = run_pipeline(p, &pipeline_config(config))?;
    Ok(match config.format {
        Format::Csv => {
            let mut s = String::from("stage,n,dim\n");
            for st in &run.report.stages {
                for (n, d) in st.dims.iter().enumerate() {
                    writeln!(s, "{},{n},{d}", st.stage).unwrap();
                }
            }
            s
        }
        Format::Json => json(&run.report),
    })
}

pub fn pipeline(doc: &PresentationDocument, config: &RunConfig) -> Out {
    match doc.load()? {
        Loaded::Rational(p) => pipeline_output(&p, config),
        Loaded::RatFunc(p) => pipeline_output(&p, config),
        Loaded::Poly(_) => Err(CliError::Document(
            "the pipeline needs coefficients in a field: use Q or Q(x)".into(),
        )),
    }
}

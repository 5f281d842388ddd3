use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::Value;
use tailspace::codes::LinearCode;
use tailspace::constructions::{
    alleq, balanced_coding_tribes, coding_tribes, harper_witness, mean_adjust_record, or_compose, tribes,
    ConstructionRecord,
};
use tailspace::formats::{self, function_to_json, to_canonical_json};
use tailspace::influence::max_pivotal_probability;
use tailspace::{tail_level, Error, Result};

use super::{emit, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Tribes,
    Alleq,
    CodingTribes,
    Balanced,
    HarperWitness,
    MeanAdjust,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    kind: ConstructKind,
    /// Number of blocks.
    #[arg(long)]
    b: Option<usize>,
    /// Block width.
    #[arg(long)]
    r: Option<usize>,
    /// Scale parameter of the balanced and Harper constructions.
    #[arg(long)]
    m: Option<u32>,
    /// Required by the randomized constructions.
    #[arg(long)]
    seed: Option<u64>,
    /// Code file for coding-tribes and mean-adjust.
    #[arg(long, conflicts_with = "code_name")]
    code: Option<PathBuf>,
    /// Built-in code: hamming, extended-hamming, simplex, golay,
    /// repetition-N, even-weight-N.
    #[arg(long)]
    code_name: Option<String>,
    #[arg(long)]
    n_target: Option<u32>,
    #[arg(long)]
    t: Option<u64>,
    /// Function file to write.
    #[arg(long)]
    function: Option<PathBuf>,
    /// Record file to write; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn need<T>(v: Option<T>, flag: &'static str, kind: ConstructKind) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter {
        name: flag,
        reason: format!(
            "`--{flag}` is required for {}",
            kind.to_possible_value().map_or(String::new(), |v| v.get_name().to_string())
        ),
    })
}

fn named_code(name: &str) -> Result<LinearCode> {
    let sized = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    match name {
        "hamming" => Ok(LinearCode::hamming()),
        "extended-hamming" => Ok(LinearCode::extended_hamming()),
        "simplex" => Ok(LinearCode::simplex()),
        "golay" => Ok(LinearCode::golay()),
        _ => {
            if let Some(n) = sized("repetition-") {
                LinearCode::repetition(n)
            } else if let Some(n) = sized("even-weight-") {
                LinearCode::even_weight(n)
            } else {
                Err(Error::InvalidParameter {
                    name: "code-name",
                    reason: format!("unknown code `{name}`"),
                })
            }
        }
    }
}

fn block_code(a: &ConstructArgs, outcome: &mut Outcome) -> Result<LinearCode> {
    match (&a.code, &a.code_name) {
        (Some(path), _) => {
            outcome.inputs.push(path.clone());
            formats::code_from_json(&formats::read_text(path)?)
        }
        (None, Some(name)) => named_code(name),
        (None, None) => Err(Error::InvalidParameter {
            name: "code",
            reason: "give `--code FILE` or `--code-name NAME`".into(),
        }),
    }
}

fn alleq_record(r: usize) -> Result<ConstructionRecord> {
    let f = alleq(r)?;
    let mean = f.exact_mean().expect("Boolean function");
    let max_piv = max_pivotal_probability(&f)?;
    let tail = tail_level(&f, false);
    let mut rec = ConstructionRecord::new("alleq", f);
    rec.param("r", r);
    rec.metric("n", r + 1)
        .metric("mean", mean.to_string())
        .metric("max_pivotal", max_piv.to_string())
        .metric("tail_k", tail);
    Ok(rec)
}

pub fn run(a: ConstructArgs) -> Result<Outcome> {
    let kind = a.kind;
    let mut outcome = Outcome::ok(true);
    let record = match kind {
        ConstructKind::Tribes => {
            let (b, r) = (need(a.b, "b", kind)?, need(a.r, "r", kind)?);
            let mut rec = or_compose(&tribes(1, r)?, b, None)?;
            rec.construction = "tribes".into();
            rec
        }
        ConstructKind::Alleq => alleq_record(need(a.r, "r", kind)?)?,
        ConstructKind::CodingTribes => {
            let b = need(a.b, "b", kind)?;
            coding_tribes(&block_code(&a, &mut outcome)?, b)?
        }
        ConstructKind::Balanced => {
            let seed = need(a.seed, "seed", kind)?;
            outcome.seeds.push(seed);
            balanced_coding_tribes(need(a.m, "m", kind)?, seed)?
        }
        ConstructKind::HarperWitness => {
            let seed = need(a.seed, "seed", kind)?;
            outcome.seeds.push(seed);
            harper_witness(need(a.m, "m", kind)?, seed)?
        }
        ConstructKind::MeanAdjust => {
            let seed = need(a.seed, "seed", kind)?;
            outcome.seeds.push(seed);
            let code = block_code(&a, &mut outcome)?;
            mean_adjust_record(need(a.n_target, "n-target", kind)?, need(a.t, "t", kind)?, &code, seed)?
        }
    };
    if let Some(path) = &a.function {
        let mut meta = BTreeMap::new();
        meta.insert("construction".to_string(), Value::from(record.construction.clone()));
        meta.insert("parameters".to_string(), serde_json::to_value(&record.parameters)?);
        emit(Some(path), &function_to_json(&record.function, &meta)?, &mut outcome)?;
    }
    for c in record.claims.iter().filter(|c| !c.holds) {
        eprintln!("claim `{}` does not hold", c.claim);
    }
    outcome.ok = record.all_hold();
    emit(a.out.as_deref(), &to_canonical_json(&record)?, &mut outcome)?;
    Ok(outcome)
}

use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Value};
use tailspace::formats::{self, to_canonical_json};
use tailspace::fourier::exact_coefficient;
use tailspace::influence::pivotal_probabilities;
use tailspace::{fwht, tail_certificate, tail_level, Dyadic, Result};

use super::{emit, Outcome};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Function file.
    input: PathBuf,
    /// Highest tail level to certify; defaults to `n`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,2,3,4")]
    p_grid: Vec<f64>,
    /// Number of largest coefficients to list.
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn subset(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn dyadic(d: &Dyadic) -> Value {
    Value::String(d.to_string())
}

pub fn run(a: AnalyzeArgs) -> Result<Outcome> {
    let (f, meta) = formats::function_from_json(&formats::read_text(&a.input)?)?;
    let n = f.n();
    let spectrum = fwht(&f);
    let top: Vec<Value> = spectrum
        .top(a.top.min(f.len()))
        .into_iter()
        .map(|(s, c)| {
            let coeff = exact_coefficient(&f, s).map_or(Value::from(c), |d| dyadic(&d));
            json!({"set": subset(s), "mask": s, "coefficient": coeff})
        })
        .collect();
    let mean = f.exact_mean().map_or(Value::from(f.mean()), |d| dyadic(&d));
    let second = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;

    let mut doc = json!({
        "n": n,
        "kind": f.kind(),
        "meta": meta,
        "mean": mean,
        "variance": second - f.mean() * f.mean(),
        "spectrum": {
            "energy": spectrum.energy(),
            "degree_weights": spectrum.degree_weights(),
            "top": top,
        },
        "tail_k": tail_level(&f, false),
        "tail_k_zero_mean": tail_level(&f, true),
    });

    if f.kind().is_boolean() {
        let pivotal = pivotal_probabilities(&f)?;
        let total = pivotal.iter().fold(Dyadic::zero(), |acc, p| acc + p);
        doc["influences"] = pivotal
            .iter()
            .enumerate()
            .map(|(i, p)| json!({"coordinate": i + 1, "pivotal": dyadic(p), "resampling": dyadic(&p.half())}))
            .collect();
        doc["total_pivotal"] = dyadic(&total);
        doc["total_resampling"] = dyadic(&total.half());
    }

    let k_max = a.k.unwrap_or(n).min(n);
    let mut certs = Vec::new();
    for k in 0..=k_max {
        certs.push(json!({
            "k": k,
            "with_mean": tail_certificate(&f, k, false)?,
            "zero_mean": tail_certificate(&f, k, true)?,
        }));
    }
    doc["tail_certificates"] = certs.into();
    doc["norms"] = a
        .p_grid
        .iter()
        .map(|&p| Ok(json!({"p": p, "value": f.lp_norm(p)?})))
        .collect::<Result<Vec<_>>>()?
        .into();

    let mut outcome = Outcome::ok(true);
    outcome.inputs.push(a.input.clone());
    emit(a.out.as_deref(), &to_canonical_json(&doc)?, &mut outcome)?;
    Ok(outcome)
}

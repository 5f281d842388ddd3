//! Seeded parallel sweeps over function families, exponents and times.
//!
//! Trial `i` draws from the ChaCha8 stream `(seed, i)`, so outcomes do not
//! depend on the number of worker threads. Reports are emitted in trial
//! order, after the closed-form cases of each check.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boolean::*;
use super::kappa::{extremal_two_point, kappa};
use super::scalar::*;
use super::semigroup::*;
use super::{params, CheckReport, DiscreteRV, POINTWISE_TOL, SWEEP_TOL};
use crate::codes::{trial_rng, LinearCode};
use crate::constructions::{coding_tribes, tribes, zero_mean_difference};
use crate::cube::{BooleanKind, CubeFunction};
use crate::error::{Error, Result};
use crate::fourier::{inverse_fwht, project_above, FourierSpectrum};
use crate::markov::{MarkovGenerator, MarkovOperator};
use crate::norm::signed_pow;

macro_rules! check_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// A sweepable check.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum CheckId { $($variant),* }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(CheckId::$variant => $name),* }
            }
        }

        impl FromStr for CheckId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(CheckId::$variant),)*
                    _ => Err(Error::param("check_id", format!(
                        "unknown check `{s}`; expected one of: {}",
                        [$($name),*].join(", ")
                    ))),
                }
            }
        }
    };
}

check_ids! {
    Kappa => "kappa",
    HeatSmoothing => "heat-smoothing",
    LpPoincare => "lp-poincare",
    TailContraction => "tail-contraction",
    SplitMoments => "split-moments",
    SplitPointwise => "split-pointwise",
    MomentGap => "moment-gap",
    StroockVaropoulos => "stroock-varopoulos",
    WeakStroockVaropoulos => "weak-stroock-varopoulos",
    SemigroupIncrement => "semigroup-increment",
    Nazarov => "nazarov",
    Talagrand => "talagrand",
    Hypercontractivity => "hypercontractivity",
    Beckner => "beckner",
    Extremal => "extremal",
    Harper => "harper",
    KklRatio => "kkl-ratio",
    DecayExponent => "decay-exponent",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sweep parameters. Unset grids fall back to per-check defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub trials: usize,
    pub seed: u64,
    pub n_max: usize,
    pub k_max: usize,
    pub states_max: usize,
    pub p_grid: Option<Vec<f64>>,
    pub t_grid: Option<Vec<f64>>,
    /// Replaces every report's tolerance when set.
    pub tol: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            n_max: 6,
            k_max: 3,
            states_max: 8,
            p_grid: None,
            t_grid: None,
            tol: None,
        }
    }
}

pub const DEFAULT_T_GRID: [f64; 5] = [0.01, 0.1, 0.5, 1.0, 2.0];
const CONTRACTION_P: [f64; 6] = [1.1, 1.5, 2.0, 3.0, 4.0, 6.0];

impl SweepConfig {
    fn p_grid_or(&self, default: &[f64]) -> Vec<f64> {
        self.p_grid.clone().unwrap_or_else(|| default.to_vec())
    }

    /// The p-grid with `p = 2` removed, for formulas singular there.
    fn p_grid_off_two(&self, default: &[f64]) -> Vec<f64> {
        self.p_grid_or(default).into_iter().filter(|&p| p != 2.0).collect()
    }

    fn t_grid(&self) -> Vec<f64> {
        self.t_grid.clone().unwrap_or_else(|| DEFAULT_T_GRID.to_vec())
    }

    fn validate(&self) -> Result<()> {
        if self.n_max == 0 || self.n_max > 12 {
            return Err(Error::param("n_max", format!("sweeps support 1..=12 bits, got {}", self.n_max)));
        }
        if self.states_max < 2 || self.states_max > 64 {
            return Err(Error::param("states_max", format!("need 2..=64 states, got {}", self.states_max)));
        }
        if self.k_max == 0 {
            return Err(Error::param("k_max", "need k_max >= 1"));
        }
        for &p in self.p_grid.iter().flatten() {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(Error::param("p_grid", format!("invalid exponent {p}")));
            }
        }
        if let Some(tol) = self.tol {
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(Error::param("tol", format!("need a finite tolerance >= 0, got {tol}")));
            }
        }
        for &t in self.t_grid.iter().flatten() {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::param("t_grid", format!("invalid time {t}")));
            }
        }
        Ok(())
    }
}

/// All reports of one sweep plus aggregates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub check_id: String,
    pub config: SweepConfig,
    pub total: usize,
    pub violations: usize,
    /// Report with the most negative `slack + tol`.
    pub worst: Option<CheckReport>,
    pub reports: Vec<CheckReport>,
    /// Input values of the first failing trial, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_input: Option<Vec<f64>>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| !r.pass)
    }
}

struct Trial {
    reports: Vec<CheckReport>,
    input: Vec<f64>,
}

fn run_trials<F>(count: usize, seed: u64, body: F) -> Result<Vec<Trial>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Trial> + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            body(&mut rng).map(|mut t| {
                for r in &mut t.reports {
                    r.params.insert("trial".into(), i.into());
                }
                t
            })
        })
        .collect()
}

fn finish(check: CheckId, cfg: &SweepConfig, fixed: Vec<CheckReport>, trials: Vec<Trial>) -> SweepOutcome {
    let failure_input = trials
        .iter()
        .find(|t| t.reports.iter().any(|r| !r.pass))
        .map(|t| t.input.clone());
    let mut reports = fixed;
    reports.extend(trials.into_iter().flat_map(|t| t.reports));
    if let Some(tol) = cfg.tol {
        for r in reports.iter_mut().filter(|r| r.tol > 0.0) {
            r.tol = tol;
            r.pass = r.slack >= -tol;
        }
    }
    let violations = reports.iter().filter(|r| !r.pass).count();
    let worst = reports
        .iter()
        .filter(|r| r.note.is_none())
        .min_by(|a, b| (a.slack + a.tol).total_cmp(&(b.slack + b.tol)))
        .cloned();
    SweepOutcome {
        check_id: check.as_str().to_string(),
        config: cfg.clone(),
        total: reports.len(),
        violations,
        worst,
        reports,
        failure_input,
    }
}

/// Mean-zero test functions in three styles: uniform noise, random signs
/// and sparse character sums.
pub fn random_mean_zero_cube<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CubeFunction> {
    let len = 1usize << n;
    let mut values: Vec<f64> = match rng.gen_range(0..3) {
        0 => (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        1 => (0..len).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect(),
        _ => {
            let mut coeffs = vec![0.0; len];
            for _ in 0..rng.gen_range(1..=3) {
                coeffs[rng.gen_range(1..len)] += rng.gen_range(-1.0..1.0);
            }
            inverse_fwht(&FourierSpectrum::new(n, coeffs)?).into_values()
        }
    };
    let mean = values.iter().sum::<f64>() / len as f64;
    values.iter_mut().for_each(|v| *v -= mean);
    CubeFunction::real(n, values)
}

fn random_state_function<R: Rng + ?Sized>(mu: &[f64], mean_zero: bool, rng: &mut R) -> Vec<f64> {
    let mut f: Vec<f64> = mu.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    if mean_zero {
        let m: f64 = f.iter().zip(mu).map(|(v, w)| v * w).sum();
        f.iter_mut().for_each(|v| *v -= m);
    }
    f
}

/// `{-1,0,1}`-valued functions with vanishing coefficients below level `k`:
/// `W_S(x)·g(y)` for `|S| = k` and a random `{0,1}` function `g` on the
/// remaining bits, or the difference `(c(x) - c(y))/2` of a random code
/// indicator `c`.
pub fn random_ternary_tail<R: Rng + ?Sized>(n_max: usize, k_max: usize, rng: &mut R) -> Result<(CubeFunction, usize)> {
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=n_max);
        let k = rng.gen_range(1..=n.min(k_max));
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(rng);
        let s: usize = coords[..k].iter().map(|&i| 1 << i).sum();
        let density = rng.gen_range(0.1..0.9);
        let table: Vec<bool> = (0..1usize << n).map(|_| rng.gen_bool(density)).collect();
        let f = CubeFunction::from_fn(n, BooleanKind::PlusMinusZeroOne, |j| {
            let sign = if (j & s).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            if table[j & !s] {
                sign
            } else {
                0.0
            }
        })?;
        Ok((f, k))
    } else {
        let len = rng.gen_range(1..=(n_max / 2).max(1));
        let dim = rng.gen_range(0..=len);
        let rows: Vec<u32> = (0..dim).map(|_| rng.gen::<u32>() & ((1 << len) - 1)).collect();
        let code = LinearCode::new(len, &rows)?;
        let f = zero_mean_difference(&code.indicator()?)?;
        let k = (crate::tail::tail_level(&f, true).unwrap_or(0) + 1).min(f.n());
        Ok((f, k))
    }
}

pub fn run_sweep(check: CheckId, cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let (fixed, trials) = match check {
        CheckId::Kappa => (kappa_reports(cfg)?, Vec::new()),
        CheckId::HeatSmoothing => contraction_sweep(cfg, true)?,
        CheckId::LpPoincare => contraction_sweep(cfg, false)?,
        CheckId::TailContraction => tail_contraction_sweep(cfg)?,
        CheckId::SplitMoments | CheckId::MomentGap => moment_sweep(check, cfg)?,
        CheckId::SplitPointwise => split_pointwise_sweep(cfg)?,
        CheckId::StroockVaropoulos => sv_sweep(cfg)?,
        CheckId::WeakStroockVaropoulos => weak_sv_sweep(cfg)?,
        CheckId::SemigroupIncrement => increment_sweep(cfg)?,
        CheckId::Nazarov => nazarov_sweep(cfg)?,
        CheckId::Talagrand => talagrand_sweep(cfg)?,
        CheckId::Hypercontractivity => hypercontractivity_sweep(cfg)?,
        CheckId::Beckner => beckner_sweep(cfg)?,
        CheckId::Extremal => (extremal_reports(cfg)?, Vec::new()),
        CheckId::Harper => harper_sweep(cfg)?,
        CheckId::KklRatio => (kkl_reports()?, Vec::new()),
        CheckId::DecayExponent => (decay_reports(cfg)?, Vec::new()),
    };
    Ok(finish(check, cfg, fixed, trials))
}

type Parts = (Vec<CheckReport>, Vec<Trial>);

const KAPPA_GRID: [f64; 10] = [1.1, 1.2, 1.25, 4.0 / 3.0, 1.5, 3.0, 4.0, 5.0, 6.0, 11.0];

fn kappa_reports(cfg: &SweepConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let closed = [(4.0, 8f64.sqrt()), (4.0 / 3.0, 8f64.sqrt()), (6.0, 2.0), (1.2, 2.0)];
    for (p, exact) in closed {
        out.push(CheckReport::equality(
            "kappa-closed-form",
            params([("p", p.into())]),
            kappa(p)?.value,
            exact,
            1e-9,
        ));
    }
    for p in cfg.p_grid_off_two(&KAPPA_GRID) {
        if p <= 1.0 {
            continue;
        }
        let k = kappa(p)?.value;
        let conj = p / (p - 1.0);
        let s = p / (p - 2.0);
        out.push(CheckReport::equality("kappa-duality", params([("p", p.into())]), k, kappa(conj)?.value, 1e-9));
        out.push(CheckReport::lower("kappa-lower-s", params([("p", p.into())]), k, s.abs(), POINTWISE_TOL));
        out.push(CheckReport::lower(
            "kappa-lower-sqrt",
            params([("p", p.into())]),
            k,
            ((p * p + 4.0 * p - 4.0) / (p * p - 4.0 * p + 4.0)).sqrt(),
            POINTWISE_TOL,
        ));
    }
    Ok(out)
}

fn extremal_reports(cfg: &SweepConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for p in cfg.p_grid_off_two(&[1.5, 3.0, 4.0, 6.0]) {
        let e = extremal_two_point(p, 1.0)?;
        out.extend(e.reports);
        let dual = extremal_two_point(p / (p - 1.0), 1.0)?;
        out.push(CheckReport::equality(
            "extremal-duality",
            params([("p", p.into())]),
            e.kappa.value,
            dual.kappa.value,
            1e-9,
        ));
        out.push(check_moment_gap(&e.x, p)?.with_note("extremal variable"));
    }
    // the equality also holds for a non-unit Poincaré constant
    out.push(extremal_two_point(4.0, 2.5)?.reports.remove(1));
    Ok(out)
}

fn contraction_sweep(cfg: &SweepConfig, heat: bool) -> Result<Parts> {
    let ps = cfg.p_grid_or(&CONTRACTION_P);
    let ts = cfg.t_grid();
    let mut fixed = Vec::new();
    if heat {
        for n in 1..=cfg.n_max.min(4) {
            let cube = Hypercube::new(n)?;
            let d = CubeFunction::dictator(n, 1)?;
            for &t in &ts {
                fixed.push(
                    CheckReport::equality(
                        "heat-smoothing-equality",
                        params([("n", n.into()), ("p", 2.0.into()), ("t", t.into())]),
                        check_heat_smoothing(&cube, d.values(), 2.0, t, HeatMode::Base)?.lhs,
                        (-t).exp(),
                        POINTWISE_TOL,
                    ),
                );
            }
        }
    } else {
        let cube = Hypercube::new(3)?;
        fixed.push(check_lp_poincare(&cube, CubeFunction::character(3, 0b001)?.values(), 2.0)?.with_note("equality case"));
        fixed.push(check_lp_poincare(&cube, CubeFunction::dictator(3, 1)?.values(), 4.0)?);
    }
    let evaluate = |sg: &dyn Semigroup, f: &[f64], gen: Option<&MarkovGenerator>| -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for &p in &ps {
            if heat {
                for &t in &ts {
                    out.push(check_heat_smoothing(sg, f, p, t, HeatMode::Base)?);
                    out.push(check_heat_smoothing(sg, f, p, t, HeatMode::Kappa)?);
                }
            } else {
                let r = check_lp_poincare(sg, f, p)?;
                if let Some(g) = gen {
                    // the same quantity through the edge-sum Dirichlet form
                    let phi: Vec<f64> = f.iter().map(|&v| signed_pow(v, p - 1.0)).collect();
                    let edge = g.dirichlet_edge_form(&phi, f)?;
                    out.push(CheckReport::lower("lp-poincare-edge", r.params.clone(), edge, r.rhs, r.tol));
                }
                out.push(r);
            }
        }
        Ok(out)
    };
    let cube_trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let n = rng.gen_range(1..=cfg.n_max);
        let f = random_mean_zero_cube(n, rng)?;
        let cube = Hypercube::new(n)?;
        Ok(Trial {
            reports: evaluate(&cube, f.values(), None)?,
            input: f.into_values(),
        })
    })?;
    let generator_trials = run_trials(cfg.trials / 4, cfg.seed ^ GENERATOR_STREAM, |rng| {
        let states = rng.gen_range(2..=cfg.states_max);
        let l = MarkovGenerator::random(states, rng)?;
        let f = random_state_function(l.space().mu(), true, rng);
        Ok(Trial {
            reports: evaluate(&l, &f, Some(&l))?,
            input: f,
        })
    })?;
    let mut trials = cube_trials;
    trials.extend(generator_trials);
    Ok((fixed, trials))
}

/// Distinguishes the generator family's streams from the cube family's.
const GENERATOR_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

fn tail_contraction_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let ps = cfg.p_grid_or(&CONTRACTION_P);
    let ts = cfg.t_grid();
    let mut fixed = Vec::new();
    for k in 1..=cfg.k_max.min(cfg.n_max) {
        let w = CubeFunction::character(cfg.n_max, (1 << k) - 1)?;
        for &t in &ts {
            let r = check_tail_contraction(&w, k, 2.0, t)?;
            fixed.push(CheckReport::equality(
                "tail-contraction-equality",
                r.params.clone(),
                r.lhs,
                r.rhs,
                POINTWISE_TOL,
            ));
        }
    }
    // zero-mean differences of coding tribes
    let blocks = [LinearCode::repetition(2)?, LinearCode::repetition(3)?];
    for block in &blocks {
        let rec = coding_tribes(block, 2)?;
        let g = zero_mean_difference(&rec.function)?;
        let k = crate::tail::tail_level(&g, true).unwrap_or(0) + 1;
        for &p in &ps {
            for &t in &ts {
                fixed.push(check_tail_contraction(&g, k, p, t)?.with_note("coding-tribes difference"));
            }
        }
    }
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let (f, k) = random_ternary_tail(cfg.n_max, cfg.k_max, rng)?;
        let mut reports = Vec::new();
        for &p in &ps {
            for &t in &ts {
                reports.push(check_tail_contraction(&f, k, p, t)?);
            }
        }
        Ok(Trial {
            reports,
            input: f.into_values(),
        })
    })?;
    Ok((fixed, trials))
}

fn moment_sweep(check: CheckId, cfg: &SweepConfig) -> Result<Parts> {
    let split = check == CheckId::SplitMoments;
    let ps = if split {
        cfg.p_grid_off_two(&[1.5, 3.0, 4.0])
    } else {
        cfg.p_grid_or(&[1.5, 2.0, 3.0, 4.0])
    };
    let mut fixed = Vec::new();
    let rad = DiscreteRV::rademacher();
    if split {
        let r = check_split_moments(&rad, 4.0)?;
        fixed.push(CheckReport::equality("split-moments-equality", r.params.clone(), r.lhs, r.rhs, POINTWISE_TOL));
    } else {
        fixed.push(check_moment_gap(&rad, 4.0)?);
        fixed.push(check_moment_gap(&rad, 2.0)?);
        fixed.push(check_moment_gap(&extremal_two_point(4.0, 1.0)?.x, 4.0)?.with_note("extremal variable"));
    }
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let x = DiscreteRV::random_mean_zero(rng.gen_range(2..=6), rng)?;
        let reports = ps
            .iter()
            .map(|&p| if split { check_split_moments(&x, p) } else { check_moment_gap(&x, p) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trial {
            reports,
            input: x.atoms().iter().flat_map(|&(v, q)| [v, q]).collect(),
        })
    })?;
    Ok((fixed, trials))
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

fn split_pointwise_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let ps = cfg.p_grid_off_two(&[1.1, 1.5, 3.0, 4.0, 6.0]);
    let fixed = vec![check_split_pointwise(2.0, 1.0, 4.0)?, check_split_pointwise(1.0, 1.0, 3.0)?];
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let a = log_uniform(rng, 1e-3, 1e3);
        let b = log_uniform(rng, 1e-3, 1e3);
        let reports = ps
            .iter()
            .map(|&p| check_split_pointwise(a, b, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trial { reports, input: vec![a, b] })
    })?;
    Ok((fixed, trials))
}

fn sv_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let ps = cfg.p_grid_or(&CONTRACTION_P);
    let mut fixed = vec![check_stroock_varopoulos(1.0, 0.0, 4.0)?, check_stroock_varopoulos(1.0, -1.0, 4.0)?];
    for (a, b) in [(0.3, -1.7), (2.0, 0.5), (-1.0, -3.0)] {
        let r = check_stroock_varopoulos(a, b, 2.0)?;
        fixed.push(CheckReport::equality("stroock-varopoulos-equality", r.params.clone(), r.lhs, r.rhs, POINTWISE_TOL));
    }
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let a = rng.gen_range(-3.0..3.0);
        let b = rng.gen_range(-3.0..3.0);
        let mut reports = ps
            .iter()
            .map(|&p| check_stroock_varopoulos(a, b, p))
            .collect::<Result<Vec<_>>>()?;
        reports.push(check_stroock_varopoulos(a, b, rng.gen_range(1.01..8.0))?);
        Ok(Trial { reports, input: vec![a, b] })
    })?;
    Ok((fixed, trials))
}

fn weak_sv_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let ps = cfg.p_grid_or(&CONTRACTION_P);
    let mut fixed = Vec::new();
    let mut rng = trial_rng(cfg.seed, u64::MAX);
    let l = MarkovGenerator::random(5, &mut rng)?;
    let f = random_state_function(l.space().mu(), false, &mut rng);
    let id = MarkovOperator::identity(l.space().clone());
    let avg = MarkovOperator::averaging(l.space().clone());
    for &p in &ps {
        let r = check_weak_stroock_varopoulos(&id, &f, p)?;
        fixed.push(CheckReport::equality(
            "weak-stroock-varopoulos-identity",
            r.params.clone(),
            r.lhs,
            r.rhs,
            POINTWISE_TOL,
        ));
        fixed.push(check_weak_stroock_varopoulos(&avg, &f, p)?.with_note("full averaging"));
    }
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let states = rng.gen_range(2..=cfg.states_max);
        let op = if rng.gen_bool(0.5) {
            MarkovOperator::random(states, rng)?
        } else {
            let n = rng.gen_range(1..=3);
            MarkovOperator::from_generator(&MarkovGenerator::hypercube(n)?, rng.gen_range(0.01..2.0))?
        };
        let f = random_state_function(op.space().mu(), false, rng);
        let reports = ps
            .iter()
            .map(|&p| check_weak_stroock_varopoulos(&op, &f, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trial { reports, input: f })
    })?;
    Ok((fixed, trials))
}

fn increment_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let fixed = vec![check_semigroup_increment(&MarkovGenerator::hypercube(4)?, 1.0, 0.1)?];
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let states = rng.gen_range(2..=cfg.states_max);
        let l = MarkovGenerator::random(states, rng)?;
        let mut reports = Vec::new();
        for _ in 0..4 {
            let eps = log_uniform(rng, 1e-3, 10.0);
            let t = log_uniform(rng, 1e-4, 10.0);
            reports.push(check_semigroup_increment(&l, eps, t)?);
        }
        Ok(Trial {
            reports,
            input: l.eigenvalues().to_vec(),
        })
    })?;
    Ok((fixed, trials))
}

fn nazarov_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let ps = cfg.p_grid_or(&[1.5, 2.0, 3.0, 5.0]);
    let l = MarkovGenerator::two_state(1.0)?;
    let op = MarkovOperator::from_generator(&l, 0.4)?;
    let r = check_nazarov(&op, &[1.0, -1.0], 2.0)?;
    let fixed = vec![CheckReport::equality("nazarov-equality", r.params.clone(), r.lhs, r.rhs, POINTWISE_TOL)];
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let states = rng.gen_range(2..=cfg.states_max);
        let op = if rng.gen_bool(0.75) {
            MarkovOperator::random(states, rng)?
        } else {
            let l = MarkovGenerator::random(states, rng)?;
            MarkovOperator::from_generator(&l, rng.gen_range(0.05..2.0))?
        };
        let g = random_state_function(op.space().mu(), true, rng);
        let mut reports = Vec::new();
        for &p in &ps {
            reports.push(check_nazarov(&op, &g, p)?);
            reports.extend(extension_operator_checks(&op, p)?);
        }
        Ok(Trial { reports, input: g })
    })?;
    Ok((fixed, trials))
}

fn talagrand_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let n_max = cfg.n_max.max(1);
    let mut fixed = Vec::new();
    for n in 1..=n_max {
        fixed.extend(check_talagrand_tail(&CubeFunction::dictator(n, 1)?, 1)?);
        fixed.extend(check_talagrand_tail(&CubeFunction::parity(n)?, n)?);
    }
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let n = rng.gen_range(1..=n_max);
        let k = rng.gen_range(1..=n.min(cfg.k_max));
        let raw = CubeFunction::real(n, (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
        let mut f = project_above(&raw, k);
        if f.values().iter().all(|&v| v.abs() < 1e-300) {
            f = CubeFunction::parity(n)?;
        }
        Ok(Trial {
            reports: check_talagrand_tail(&f, k)?.to_vec(),
            input: f.into_values(),
        })
    })?;
    Ok((fixed, trials))
}

fn hypercontractivity_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let ts = cfg.t_grid();
    let mut fixed = Vec::new();
    let two_point = CubeFunction::real(1, vec![1.1, 0.9])?;
    fixed.push(check_hypercontractivity(&two_point, std::f64::consts::LN_2 / 2.0)?);
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let n = rng.gen_range(1..=cfg.n_max);
        let f = CubeFunction::real(n, (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
        let reports = ts
            .iter()
            .map(|&t| check_hypercontractivity(&f, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trial {
            reports,
            input: f.into_values(),
        })
    })?;
    Ok((fixed, trials))
}

fn beckner_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let ps: Vec<f64> = cfg
        .p_grid_or(&[1.0, 1.25, 1.5, 1.75, 2.0])
        .into_iter()
        .filter(|p| (1.0..=2.0).contains(p))
        .collect();
    let d = CubeFunction::dictator(2, 1)?;
    let fixed = vec![check_beckner(&d, 1.0)?, check_beckner(&d, 2.0)?];
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let n = rng.gen_range(1..=cfg.n_max);
        let f = CubeFunction::real(n, (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
        let reports = ps.iter().map(|&p| check_beckner(&f, p)).collect::<Result<Vec<_>>>()?;
        Ok(Trial {
            reports,
            input: f.into_values(),
        })
    })?;
    Ok((fixed, trials))
}

fn harper_sweep(cfg: &SweepConfig) -> Result<Parts> {
    let mut fixed = vec![
        check_harper(&CubeFunction::dictator(3, 1)?.to_zero_one()?)?,
        check_harper(&CubeFunction::from_predicate(4, BooleanKind::ZeroOne, |j| j == 0)?)?,
    ];
    for sub in 1..=cfg.n_max.min(6) {
        // subcube indicators are the equality cases
        let mask = (1usize << sub) - 1;
        let f = CubeFunction::from_predicate(cfg.n_max, BooleanKind::ZeroOne, |j| j & mask == 0)?;
        fixed.push(check_harper(&f)?.with_note("subcube"));
    }
    let trials = run_trials(cfg.trials, cfg.seed, |rng| {
        let n = rng.gen_range(1..=cfg.n_max);
        let density = rng.gen_range(0.0..1.0);
        let values: Vec<f64> = (0..1usize << n).map(|_| if rng.gen_bool(density) { 1.0 } else { 0.0 }).collect();
        let f = CubeFunction::new(n, values, BooleanKind::ZeroOne)?;
        Ok(Trial {
            reports: vec![check_harper(&f)?],
            input: f.into_values(),
        })
    })?;
    Ok((fixed, trials))
}

fn kkl_reports() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    out.push(check_kkl_ratio(&CubeFunction::dictator(8, 1)?)?.with_param("family", "dictator"));
    out.push(check_kkl_ratio(&CubeFunction::majority(9)?)?.with_param("family", "majority"));
    for (b, r) in [(2, 2), (3, 2), (4, 3), (5, 3), (7, 3), (6, 4)] {
        out.push(
            check_kkl_ratio(&tribes(b, r)?)?
                .with_param("family", "tribes")
                .with_param("blocks", b)
                .with_param("width", r),
        );
    }
    for b in 1..=3 {
        let rec = coding_tribes(&LinearCode::hamming(), b)?;
        out.push(
            check_kkl_ratio(&rec.function)?
                .with_param("family", "coding-tribes")
                .with_param("blocks", b)
                .with_param("block_code", "hamming-7-4"),
        );
    }
    Ok(out)
}

fn decay_reports(cfg: &SweepConfig) -> Result<Vec<CheckReport>> {
    let ps = cfg.p_grid_or(&[1.5, 2.0, 4.0]);
    let ts = cfg.t_grid();
    let mut out = Vec::new();
    for k in 1..=cfg.k_max.min(cfg.n_max) {
        let n = cfg.n_max;
        let chars: Vec<CubeFunction> = (0..1usize << n)
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| CubeFunction::character(n, s))
            .collect::<Result<_>>()?;
        let mut rng = trial_rng(cfg.seed, k as u64);
        let mut ternary = Vec::new();
        while ternary.len() < 64 {
            let (f, fk) = random_ternary_tail(cfg.n_max, cfg.k_max, &mut rng)?;
            if fk >= k && f.values().iter().any(|&v| v != 0.0) {
                ternary.push(f);
            }
        }
        for &p in &ps {
            let floor = 2.0 * ((p - 1.0) / p).min(1.0 / p);
            for (family, fam) in [("characters", &chars), ("ternary-tail", &ternary)] {
                let e = estimate_decay_exponent(fam, p, k, &ts)?;
                let ps = params([
                    ("family", family.into()),
                    ("k", k.into()),
                    ("p", p.into()),
                    ("samples", e.samples.into()),
                ]);
                out.push(CheckReport::lower("decay-exponent", ps, e.c, floor, SWEEP_TOL).with_note(e.note));
            }
            if k == 1 {
                let e = estimate_decay_exponent(&chars, p, 1, &ts)?;
                let base = (2.0 * p - 2.0) / (p * p - 2.0 * p + 2.0);
                out.push(
                    CheckReport::lower(
                        "decay-exponent-base-floor",
                        params([("k", 1.into()), ("p", p.into())]),
                        e.c,
                        base,
                        SWEEP_TOL,
                    )
                    .with_note(e.note),
                );
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize) -> SweepConfig {
        SweepConfig {
            trials,
            seed: 11,
            n_max: 4,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn every_check_runs_and_passes_small() {
        for &check in CheckId::ALL {
            let out = run_sweep(check, &small(12)).unwrap();
            assert!(out.total > 0, "{check}");
            assert!(out.passed(), "{check}: {}", out.failures().next().unwrap());
        }
    }

    #[test]
    fn ids_round_trip() {
        for &check in CheckId::ALL {
            assert_eq!(check.as_str().parse::<CheckId>().unwrap(), check);
        }
        assert!("no-such-check".parse::<CheckId>().is_err());
    }

    #[test]
    fn independent_of_thread_count() {
        let cfg = small(40);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| run_sweep(CheckId::HeatSmoothing, &cfg)).unwrap();
        let b = run_sweep(CheckId::HeatSmoothing, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn ternary_tail_family_is_certified() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..50 {
            let (f, k) = random_ternary_tail(8, 3, &mut rng).unwrap();
            crate::tail::require_vanishing_below(&f, k).unwrap();
            assert!(f.values().iter().all(|v| [-1.0, 0.0, 1.0].contains(v)));
        }
    }
}

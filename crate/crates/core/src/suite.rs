//! Named numerical checks with tolerances, run as one batch and rendered as a
//! deterministic text report.

use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{fourier_coefficients, SymmetryClass};
use crate::comb::construct::{comb_grid, CombFunction, Variant};
use crate::comb::delta::{comb_constants, DeltaComb};
use crate::comb::exact::ratio;
use crate::comb::fit::fit_bigaussian;
use crate::comb::limits::{limit_entropy, limit_pnorm};
use crate::comb::precise::{bigaussian_precise, PreciseBigaussian, DEFAULT_BITS};
use crate::comb::profile::GaussianProfile2D;
use crate::comb::stationarity::{gaussian_stationarity_residual, stationarity_residual};
use crate::error::Result;
use crate::functionals::{
    entropy_bound, entropy_from_sq_slope, grid_fourier, odd_entropy_bound, p_norm,
    total_entropy_converged, EntropyEvaluator,
};
use crate::minimizer::{minimize_entropy, random_start, MinimizeConfig, MinimizeResult};
use crate::sig9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Fast,
    Slow,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Fast => "fast",
            Tier::Slow => "slow",
        }
    }
}

/// Which tiers a run includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TierFilter {
    Fast,
    All,
}

impl TierFilter {
    pub fn includes(self, tier: Tier) -> bool {
        matches!((self, tier), (TierFilter::All, _) | (TierFilter::Fast, Tier::Fast))
    }

    pub fn name(self) -> &'static str {
        match self {
            TierFilter::Fast => "fast",
            TierFilter::All => "all",
        }
    }
}

impl std::str::FromStr for TierFilter {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(TierFilter::Fast),
            "all" => Ok(TierFilter::All),
            _ => Err(crate::Error::Config(format!("unknown tier {s:?}, expected fast or all"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// What a check measured. `detail` carries any secondary numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub measured: f64,
    pub reference: f64,
    pub passed: bool,
    pub detail: String,
}

impl Measurement {
    /// Passes when `|measured − reference| ≤ tolerance`.
    fn near(measured: f64, reference: f64, tolerance: f64) -> Self {
        Self { measured, reference, passed: (measured - reference).abs() <= tolerance, detail: String::new() }
    }

    /// Passes when `measured ≤ tolerance`, against a reference of zero.
    fn below(measured: f64, tolerance: f64) -> Self {
        Self { measured, reference: 0.0, passed: measured <= tolerance, detail: String::new() }
    }

    fn and(mut self, cond: bool, detail: String) -> Self {
        self.passed &= cond;
        self.detail = detail;
        self
    }

    fn note(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

type CheckFn = fn(&Context) -> Result<Measurement>;

#[derive(Clone)]
pub struct CheckSpec {
    pub id: &'static str,
    pub tolerance: f64,
    pub tier: Tier,
    run: CheckFn,
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec").field("id", &self.id).field("tolerance", &self.tolerance).field("tier", &self.tier).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub tier: Tier,
    pub status: Status,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub detail: String,
    pub runtime: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub filter: TierFilter,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    /// Items with no numerical check, and why.
    pub out_of_scope: Vec<(String, String)>,
    pub passed: bool,
}

/// Shared, lazily computed inputs for checks that reuse expensive results.
struct Context {
    seed: u64,
    precise: OnceLock<Result<Vec<PreciseBigaussian>>>,
    odd_minimum: OnceLock<Result<MinimizeResult>>,
}

const SCALE_STEPS: [f64; 3] = [0.2, 0.1, 0.05];

impl Context {
    fn precise(&self) -> Result<Vec<PreciseBigaussian>> {
        self.precise
            .get_or_init(|| SCALE_STEPS.iter().map(|&a| bigaussian_precise(a, DEFAULT_BITS)).collect())
            .clone()
    }

    fn odd_minimum(&self) -> Result<MinimizeResult> {
        self.odd_minimum
            .get_or_init(|| {
                let mut cfg = MinimizeConfig::new(128, SymmetryClass::OddFplus);
                cfg.seed = self.seed;
                minimize_entropy(&cfg)
            })
            .clone()
    }
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| sig9(x)).collect::<Vec<_>>().join(",")
}

fn sampled_minimum(seed: u64, class: SymmetryClass, n: usize, bound: f64) -> Result<Measurement> {
    let ev = EntropyEvaluator::for_class(class, n)?;
    let mut lowest = f64::INFINITY;
    for i in 0..16 {
        let c = ev.to_coefficients(&random_start(&ev, seed.wrapping_add(i)));
        lowest = lowest.min(total_entropy_converged(&c, 1e-9)?.total);
    }
    let gap = lowest - bound;
    Ok(Measurement { measured: gap, reference: 0.0, passed: gap >= 0.0, detail: format!("lowest={}", sig9(lowest)) })
}

fn check_bound_reference(_: &Context) -> Result<Measurement> {
    Ok(Measurement::near(entropy_bound(), 0.306_852_82, 5e-9))
}

fn check_odd_reference(_: &Context) -> Result<Measurement> {
    Ok(Measurement::near(odd_entropy_bound(), 0.613_705_64, 5e-9))
}

fn check_bound_sampling(ctx: &Context) -> Result<Measurement> {
    sampled_minimum(ctx.seed, SymmetryClass::Full, 12, entropy_bound())
}

fn check_odd_sampling(ctx: &Context) -> Result<Measurement> {
    sampled_minimum(ctx.seed, SymmetryClass::OddFplus, 32, odd_entropy_bound())
}

/// `|gap|` decreases over the scale steps when each value is separated from
/// the next by more than both error estimates.
fn resolved_decrease(gaps: &[f64], errs: &[f64]) -> bool {
    gaps.windows(2).zip(errs.windows(2)).all(|(g, e)| g[1].abs() + e[1] < g[0].abs() - e[0])
}

fn check_bigaussian_entropy(ctx: &Context) -> Result<Measurement> {
    let r = ctx.precise()?;
    let gaps: Vec<f64> = r.iter().map(|p| p.total_gap).collect();
    let errs: Vec<f64> = r.iter().map(|p| p.error_bound).collect();
    Ok(Measurement::below(gaps[2].abs(), 1e-3)
        .and(resolved_decrease(&gaps, &errs), format!("gaps={} errors={}", list(&gaps), list(&errs))))
}

fn check_bigaussian_norm(ctx: &Context) -> Result<Measurement> {
    let r = ctx.precise()?;
    let gaps: Vec<f64> = r.iter().map(|p| p.norm_gap).collect();
    let errs: Vec<f64> = r.iter().map(|p| p.error_bound).collect();
    Ok(Measurement::below(gaps[2].abs(), 1e-3)
        .and(resolved_decrease(&gaps, &errs), format!("gaps={} errors={}", list(&gaps), list(&errs))))
}

fn check_gap_decay(_: &Context) -> Result<Measurement> {
    let gaps = SCALE_STEPS
        .iter()
        .map(|&a| CombFunction::bigaussian(a, Variant::Plain)?.variant_gap(Variant::Primed, &comb_grid(a)?, 2.0))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Measurement::below(gaps[2], 1e-3).and(strictly_decreasing(&gaps), format!("gaps={}", list(&gaps))))
}

fn check_truncation_ratio(_: &Context) -> Result<Measurement> {
    let gap = |a: f64| -> Result<f64> {
        CombFunction::bigaussian(a, Variant::Primed)?.variant_gap(Variant::TruncatedPrimed, &comb_grid(a)?, 2.0)
    };
    let (g1, g2) = (gap(0.1)?, gap(0.05)?);
    let ratio = g1 / g2;
    Ok(Measurement { measured: ratio, reference: 4.0, passed: ratio >= 4.0, detail: format!("gaps={}", list(&[g1, g2])) })
}

/// Seeded rational dilation factors `k/m` with `k, m ∈ [1, 40]`.
fn dilations(seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..8).map(|_| ratio(rng.gen_range(1..=40), rng.gen_range(1..=40))).collect()
}

fn check_dual_identities(ctx: &Context) -> Result<Measurement> {
    let mut failures = 0;
    for base in [DeltaComb::alternating(), DeltaComb::uniform()] {
        for mu in dilations(ctx.seed) {
            let d = base.dilate(&mu)?;
            let dual = d.dual_lattice()?;
            let reciprocal = &d.lattice.r * &dual.r == BigRational::from_integer(1.into());
            let back = d.fourier_dual()?.fourier_dual()?;
            if !(reciprocal && d.norm_balance_holds()? && back.lattice.r == d.lattice.r && back.lattice.b == d.lattice.b) {
                failures += 1;
            }
        }
    }
    Ok(Measurement::below(failures as f64, 0.0))
}

fn check_alternating_constants(_: &Context) -> Result<Measurement> {
    let d = DeltaComb::alternating();
    let mut failures = 0;
    for p in [ratio(4, 3), ratio(3, 2), ratio(2, 1)] {
        let k = comb_constants(&d, &p)?;
        if !(k.exp_cq.is_one() && k.exp_c.is_one()) {
            failures += 1;
        }
    }
    Ok(Measurement::below(failures as f64, 0.0))
}

fn check_constant_bounds(ctx: &Context) -> Result<Measurement> {
    let mut failures = 0;
    for mu in dilations(ctx.seed) {
        let d = DeltaComb::alternating().dilate(&mu)?;
        for p in [ratio(5, 4), ratio(4, 3), ratio(2, 1)] {
            if !comb_constants(&d, &p)?.bounds_ok() {
                failures += 1;
            }
        }
    }
    Ok(Measurement::below(failures as f64, 0.0))
}

fn check_dilation_invariance(ctx: &Context) -> Result<Measurement> {
    let base = DeltaComb::alternating();
    let p = ratio(4, 3);
    let k0 = comb_constants(&base, &p)?;
    let rb0 = base.r_over_b2()?;
    let mut failures = 0;
    for mu in dilations(ctx.seed) {
        let d = base.dilate(&mu)?;
        let k = comb_constants(&d, &p)?;
        if !(d.r_over_b2()? == rb0 && k.exp_cq == k0.exp_cq && k.exp_c == k0.exp_c) {
            failures += 1;
        }
    }
    Ok(Measurement::below(failures as f64, 0.0))
}

fn check_limit_floor(ctx: &Context) -> Result<Measurement> {
    let mut lowest = f64::INFINITY;
    for mu in dilations(ctx.seed) {
        let d = DeltaComb::alternating().dilate(&mu)?;
        for (wa, wb) in [(1.0, 1.0), (0.5, 3.0), (4.0, 0.25)] {
            let g = GaussianProfile2D::separable(2.0 * std::f64::consts::PI * wa, 2.0 * std::f64::consts::PI * wb)?;
            lowest = lowest.min(limit_entropy(&d, &g, 2.0)?.s);
        }
    }
    let gap = lowest - odd_entropy_bound();
    Ok(Measurement { measured: gap, reference: 0.0, passed: gap >= -1e-12, detail: format!("lowest={}", sig9(lowest)) })
}

fn check_limit_pnorm(_: &Context) -> Result<Measurement> {
    let a = 0.02;
    let d = DeltaComb::alternating().dilate(&ratio(3, 2))?;
    let g = GaussianProfile2D::symmetric();
    let f = CombFunction::new(d.clone(), g, a, Variant::Plain)?;
    let grid = comb_grid(a / 1.5)?;
    let numeric = p_norm(&f.eval(&grid)?, 1.0)?;
    Ok(Measurement::near(numeric, limit_pnorm(&d, &g, 1.0), 1e-3))
}

fn check_gaussian_stationarity(_: &Context) -> Result<Measurement> {
    Ok(Measurement::below(gaussian_stationarity_residual(4.0)?, 1e-7))
}

fn check_stationarity_decay(_: &Context) -> Result<Measurement> {
    let d = DeltaComb::alternating();
    let g = GaussianProfile2D::symmetric();
    let r = [stationarity_residual(&d, &g, 0.2, 4.0)?, stationarity_residual(&d, &g, 0.1, 4.0)?];
    Ok(Measurement { measured: r[1], reference: r[0], passed: r[1] < r[0], detail: format!("residuals={}", list(&r)) })
}

fn check_sq_slope(ctx: &Context) -> Result<Measurement> {
    let ev = EntropyEvaluator::for_class(SymmetryClass::Full, 8)?;
    let c = ev.to_coefficients(&random_start(&ev, ctx.seed));
    let target = total_entropy_converged(&c, 1e-10)?.total;
    let errs = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&s| Ok((entropy_from_sq_slope(&c, s)? - target).abs()))
        .collect::<Result<Vec<f64>>>()?;
    // first order: each decade of step size buys about one decade of error
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log10()).collect();
    let first_order = orders.iter().all(|&o| (0.7..=1.3).contains(&o));
    Ok(Measurement::below(errs[2], 1e-2).and(first_order, format!("errors={} orders={}", list(&errs), list(&orders))))
}

fn check_gradient(ctx: &Context) -> Result<Measurement> {
    let ev = EntropyEvaluator::for_class(SymmetryClass::Full, 8)?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let x = ev.pack(&random_start(&ev, ctx.seed.wrapping_add(100 + i)));
        let (_, g) = ev.value_and_gradient_packed(&x)?;
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
        for k in 0..x.len() {
            let h = 1e-6;
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let fd = (ev.value_and_gradient_packed(&xp)?.0 - ev.value_and_gradient_packed(&xm)?.0) / (2.0 * h);
            worst = worst.max((fd - g[k]).abs() / scale);
        }
    }
    Ok(Measurement::below(worst, 1e-5))
}

fn check_comb_duality(_: &Context) -> Result<Measurement> {
    let a = 0.29;
    let grid = comb_grid(a)?;
    let f = CombFunction::bigaussian(a, Variant::Plain)?.eval(&grid)?;
    let fp = CombFunction::bigaussian(a, Variant::Primed)?.eval(&grid)?;
    let err = grid_fourier(&f)?.sup_distance(&fp.scale(Complex64::new(0.0, 1.0)))?;
    Ok(Measurement::below(err, 1e-6))
}

fn check_double_transform(_: &Context) -> Result<Measurement> {
    let a = 0.1;
    let f = CombFunction::bigaussian(a, Variant::Plain)?.eval(&comb_grid(a)?)?;
    // twice the transform is the reflection, which negates an odd function
    let twice = grid_fourier(&grid_fourier(&f)?)?;
    Ok(Measurement::below(twice.sup_distance(&f.scale(Complex64::new(-1.0, 0.0)))?, 1e-5))
}

fn check_coefficient_period(ctx: &Context) -> Result<Measurement> {
    let ev = EntropyEvaluator::for_class(SymmetryClass::Full, 24)?;
    let c = ev.to_coefficients(&random_start(&ev, ctx.seed));
    let four = (0..4).fold(c.clone(), |acc, _| fourier_coefficients(&acc));
    Ok(Measurement::below(if four == c { 0.0 } else { 1.0 }, 0.0))
}

fn check_full_minimum(ctx: &Context) -> Result<Measurement> {
    let mut cfg = MinimizeConfig::new(16, SymmetryClass::Full);
    cfg.seed = ctx.seed;
    let r = minimize_entropy(&cfg)?;
    Ok(Measurement::near(r.report.total, entropy_bound(), 1e-6))
}

fn check_self_fit(_: &Context) -> Result<Measurement> {
    let a = 0.29;
    let f = CombFunction::bigaussian(a, Variant::Plain)?.eval(&comb_grid(a)?)?;
    let fit = fit_bigaussian(&f)?;
    Ok(Measurement::near(fit.a, a, 1e-4).and(fit.residual < 1e-6, format!("mu={} residual={}", sig9(fit.mu), sig9(fit.residual))))
}

fn check_odd_minimum(ctx: &Context) -> Result<Measurement> {
    let r = ctx.odd_minimum()?;
    let total = r.report.total;
    let inside = (odd_entropy_bound() - 1e-7..=0.613_706_0).contains(&total);
    Ok(Measurement::near(total, 0.613_705_81, 5e-7).and(inside && r.converged, format!(
        "above_floor={} iterations={} converged={}",
        sig9(total - odd_entropy_bound()),
        r.iterations,
        r.converged
    )))
}

fn check_odd_minimum_fit(ctx: &Context) -> Result<Measurement> {
    let r = ctx.odd_minimum()?;
    let grid = crate::functionals::default_grid(&r.coefficients);
    let f = crate::basis::synthesize(&r.coefficients, &grid)?;
    let fit = fit_bigaussian(&f)?;
    Ok(Measurement::near(fit.a, 0.29, 0.02).note(format!("mu={} residual={}", sig9(fit.mu), sig9(fit.residual))))
}

fn check_symmetry_neutrality(ctx: &Context) -> Result<Measurement> {
    let run = |class| {
        let mut cfg = MinimizeConfig::new(32, class);
        cfg.seed = ctx.seed;
        minimize_entropy(&cfg).map(|r| r.report.total)
    };
    let (odd, fplus) = (run(SymmetryClass::Odd)?, run(SymmetryClass::OddFplus)?);
    Ok(Measurement::near(odd, fplus, 1e-6).note(format!("odd={} odd_fplus={}", sig9(odd), sig9(fplus))))
}

/// Every check, in report order.
pub fn checks() -> Vec<CheckSpec> {
    use Tier::*;
    let check = |id, tolerance, tier, run: CheckFn| CheckSpec { id, tolerance, tier, run };
    let mut v = vec![
        check("bigaussian.entropy_gap", 1e-3, Fast, check_bigaussian_entropy),
        check("bigaussian.norm_gap", 1e-3, Fast, check_bigaussian_norm),
        check("bound.reference", 5e-9, Fast, check_bound_reference),
        check("bound.sampling", 0.0, Fast, check_bound_sampling),
        check("comb.alternating_constants", 0.0, Fast, check_alternating_constants),
        check("comb.constant_bounds", 0.0, Fast, check_constant_bounds),
        check("comb.dilation_invariance", 0.0, Fast, check_dilation_invariance),
        check("comb.dual_identities", 0.0, Fast, check_dual_identities),
        check("comb.gap_decay", 1e-3, Fast, check_gap_decay),
        check("comb.truncation_ratio", 4.0, Fast, check_truncation_ratio),
        check("fit.bigaussian_self", 1e-4, Fast, check_self_fit),
        check("fit.odd_minimum_scale", 0.02, Slow, check_odd_minimum_fit),
        check("fourier.coefficient_period", 0.0, Fast, check_coefficient_period),
        check("fourier.comb_duality", 1e-6, Fast, check_comb_duality),
        check("fourier.double_transform", 1e-5, Fast, check_double_transform),
        check("gradient.finite_difference", 1e-5, Fast, check_gradient),
        check("limits.entropy_floor", 1e-12, Fast, check_limit_floor),
        check("limits.pnorm", 1e-3, Fast, check_limit_pnorm),
        check("minimum.full_n16", 1e-6, Fast, check_full_minimum),
        check("minimum.odd_n128", 5e-7, Slow, check_odd_minimum),
        check("minimum.symmetry_neutrality", 1e-6, Fast, check_symmetry_neutrality),
        check("odd.reference", 5e-9, Fast, check_odd_reference),
        check("odd.sampling", 0.0, Fast, check_odd_sampling),
        check("sq.right_derivative", 1e-2, Fast, check_sq_slope),
        check("stationarity.comb_decay", 0.0, Fast, check_stationarity_decay),
        check("stationarity.gaussian", 1e-7, Fast, check_gaussian_stationarity),
    ];
    v.sort_by_key(|c| c.id);
    v
}

/// Items reported without a numerical check.
pub fn out_of_scope() -> Vec<(String, String)> {
    [
        ("comb.classification", "the admissible comb class is not characterised beyond lattices"),
        ("limits.weak_convergence", "weak convergence is not a norm statement; the scale fit is a proxy"),
        ("limits.general_profiles", "only Gaussian profiles are evaluated"),
    ]
    .iter()
    .map(|&(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

/// Runs every check in the filter concurrently. Failures and errors are
/// recorded, never propagated.
pub fn run_suite(filter: TierFilter, seed: u64) -> SuiteReport {
    run_checks(&checks(), filter, seed)
}

pub fn run_checks(list: &[CheckSpec], filter: TierFilter, seed: u64) -> SuiteReport {
    let ctx = Context { seed, precise: OnceLock::new(), odd_minimum: OnceLock::new() };
    let mut checks: Vec<CheckResult> = list
        .par_iter()
        .map(|item| {
            let base = CheckResult {
                id: item.id.to_string(),
                tier: item.tier,
                status: Status::Skipped,
                measured: f64::NAN,
                reference: f64::NAN,
                tolerance: item.tolerance,
                detail: String::new(),
                runtime: Duration::ZERO,
            };
            if !filter.includes(item.tier) {
                return CheckResult { detail: format!("{} tier not selected", item.tier.name()), ..base };
            }
            let start = Instant::now();
            let outcome = (item.run)(&ctx);
            let runtime = start.elapsed();
            match outcome {
                Ok(m) => CheckResult {
                    status: if m.passed { Status::Pass } else { Status::Fail },
                    measured: m.measured,
                    reference: m.reference,
                    detail: m.detail,
                    runtime,
                    ..base
                },
                Err(e) => CheckResult { status: Status::Fail, detail: format!("error: {e}"), runtime, ..base },
            }
        })
        .collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    SuiteReport { filter, seed, checks, out_of_scope: out_of_scope(), passed }
}

impl SuiteReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// One record per check. Runtimes sit on `#` lines so that the remaining
    /// body is identical across runs with the same seed.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "entropy-lab verification report");
        let _ = writeln!(s, "tier: {}", self.filter.name());
        let _ = writeln!(s, "seed: {}", self.seed);
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {} tier={} measured={} reference={} tolerance={}",
                c.status.name(),
                c.id,
                c.tier.name(),
                sig9(c.measured),
                sig9(c.reference),
                sig9(c.tolerance)
            );
            if !c.detail.is_empty() {
                let _ = writeln!(s, "    {}", c.detail);
            }
            if c.status != Status::Skipped {
                let _ = writeln!(s, "# runtime {} {:.3} s", c.id, c.runtime.as_secs_f64());
            }
        }
        for (id, why) in &self.out_of_scope {
            let _ = writeln!(s, "[out-of-scope] {id}: {why}");
        }
        let _ = writeln!(
            s,
            "summary: {} passed, {} failed, {} skipped: {}",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped),
            if self.passed { "PASS" } else { "FAIL" }
        );
        s
    }

    /// `id.field=value` lines.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite.tier={}", self.filter.name());
        let _ = writeln!(s, "suite.seed={}", self.seed);
        for c in &self.checks {
            let _ = writeln!(s, "{}.status={}", c.id, c.status.name());
            let _ = writeln!(s, "{}.tier={}", c.id, c.tier.name());
            let _ = writeln!(s, "{}.measured={}", c.id, sig9(c.measured));
            let _ = writeln!(s, "{}.reference={}", c.id, sig9(c.reference));
            let _ = writeln!(s, "{}.tolerance={}", c.id, sig9(c.tolerance));
        }
        for (id, _) in &self.out_of_scope {
            let _ = writeln!(s, "{id}.status=out-of-scope");
        }
        let _ = writeln!(s, "suite.passed={}", self.passed);
        s
    }
}

/// The report text without `#` lines.
pub fn report_body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

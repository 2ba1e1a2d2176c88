//! Hurwitz zeta derivatives at negative integers, used to correct trapezoid
//! sums of integrands with `u^k log|u|` singularities.

/// Even Bernoulli numbers `B_2, B_4, …, B_16`.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const SHIFT: usize = 6;

/// `∂ζ(s, a)/∂s` at `s = −k` for `a ∈ (0, 1]`, with the limit `a → 0⁺`
/// accepted as `a = 0`.
///
/// The first terms of the series are summed directly and the tail is taken
/// from the Euler–Maclaurin expansion at `A = a + 6`. Cancellation between
/// the two limits the absolute accuracy to about 1e-12, which is ample for
/// its use as a correction term.
pub fn hurwitz_zeta_deriv_neg(k: u32, a: f64) -> f64 {
    assert!((0.0..=1.0).contains(&a), "shift {a} outside [0, 1]");
    let s = -(k as f64);
    let kf = k as f64;
    let mut head = 0.0;
    for n in 0..SHIFT {
        let t = n as f64 + a;
        if t > 0.0 {
            head += t.powf(kf) * t.ln();
        }
    }
    let big = a + SHIFT as f64;
    let ln_big = big.ln();
    let mut tail = -big.powf(1.0 - s) * (ln_big / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0)));
    tail -= 0.5 * ln_big * big.powf(-s);
    let mut factorial = 1.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = j + 1;
        factorial *= ((2 * j - 1) * (2 * j)) as f64;
        // P(s) = Π_{i=0}^{2j−2} (s + i) and its derivative.
        let factors: Vec<f64> = (0..=(2 * j - 2)).map(|i| s + i as f64).collect();
        let p: f64 = factors.iter().product();
        let dp: f64 = (0..factors.len())
            .map(|skip| factors.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, f)| f).product::<f64>())
            .sum();
        let power = big.powf(-s - 2.0 * j as f64 + 1.0);
        tail += b / factorial * (dp - p * ln_big) * power;
    }
    tail - head
}

/// Leading trapezoid defect for `u^k log|u|` sampled at spacing `h` with the
/// singularity a fraction `theta` of a cell above the nearest node below:
/// `h Σ f(x_j) − ∫ f = −h^{k+1} G(z) K_k(θ)` for `f = (x − z)^k log|x − z| G(x)`.
///
/// Nodes to the right sit at distances `(n + 1 − θ)h`, nodes to the left at
/// `(n + θ)h` with the sign `(−1)^k`.
pub fn trapezoid_log_defect(k: u32, theta: f64) -> f64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    hurwitz_zeta_deriv_neg(k, 1.0 - theta) + sign * hurwitz_zeta_deriv_neg(k, theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_values() {
        // ζ'(−2) = −ζ(3)/(4π²)
        let z3 = 1.202_056_903_159_594_3;
        let expect = -z3 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
        assert!((hurwitz_zeta_deriv_neg(2, 1.0) - expect).abs() < 1e-11);
        assert!((hurwitz_zeta_deriv_neg(2, 0.0) - expect).abs() < 1e-11);
        let table = [
            (2, 0.3, -0.002_218_713_432_549_277),
            (2, 0.7, 0.021_518_206_434_550_594),
            (3, 0.3, -0.012_762_444_161_095_845),
            (3, 0.05, 0.000_467_653_184_287_245_4),
            (4, 0.999, 0.007_970_448_088_124_401),
        ];
        for (k, a, v) in table {
            assert!((hurwitz_zeta_deriv_neg(k, a) - v).abs() < 1e-11, "k={k} a={a}");
        }
    }

    #[test]
    fn predicts_trapezoid_error_for_log_singularity() {
        // f(x) = (x − z)^k log|x − z| e^{−x²}; reference integral from a much finer sum
        // with the predicted defect removed.
        let sum = |h: f64, z: f64, k: i32| {
            let m = (12.0 / h) as i64;
            let mut acc = 0.0;
            for j in -m..=m {
                let x = j as f64 * h;
                let d = x - z;
                if d != 0.0 {
                    acc += d.powi(k) * d.abs().ln() * (-x * x).exp();
                }
            }
            acc * h
        };
        for (k, z) in [(2, 0.006_f64), (3, 0.013)] {
            let fine_h = 0.02 / 64.0;
            let theta_f = (z / fine_h).rem_euclid(1.0);
            let g = (-z * z).exp();
            let exact = sum(fine_h, z, k) + fine_h.powi(k + 1) * g * trapezoid_log_defect(k as u32, theta_f);
            let h = 0.02;
            let theta = (z / h).rem_euclid(1.0);
            let predicted = -h.powi(k + 1) * g * trapezoid_log_defect(k as u32, theta);
            let actual = sum(h, z, k) - exact;
            assert!((actual - predicted).abs() < 0.01 * predicted.abs(), "k={k} {actual} vs {predicted}");
        }
    }
}

//! Standard normal density, distribution and quantile functions.

use core::f64::consts::{PI, SQRT_2};

pub fn pdf(u: f64) -> f64 {
    if u.is_infinite() {
        return 0.0;
    }
    libm::exp(-0.5 * u * u) / libm::sqrt(2.0 * PI)
}

pub fn cdf(u: f64) -> f64 {
    0.5 * libm::erfc(-u / SQRT_2)
}

/// Upper tail `1 - cdf(u)` without cancellation.
pub fn sf(u: f64) -> f64 {
    0.5 * libm::erfc(u / SQRT_2)
}

/// Probability mass of `[a, b]`, computed on whichever tail keeps precision.
pub fn mass(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        sf(a) - sf(b)
    } else {
        cdf(b) - cdf(a)
    }
}

/// Quantile function. Acklam's rational approximation followed by one
/// Halley correction step, accurate to a few ulps on (0, 1).
pub fn inverse_cdf(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const LOW: f64 = 0.024_25;

    let x = if p < LOW {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = libm::sqrt(-2.0 * libm::log(1.0 - p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    let e = if p < 0.5 { cdf(x) - p } else { (1.0 - p) - sf(x) };
    let u = e * libm::sqrt(2.0 * PI) * libm::exp(x * x / 2.0);
    x - u / (1.0 + x * u / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_inverts_cdf() {
        for &p in &[1e-9, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.95, 0.999, 1.0 - 1e-7] {
            let x = inverse_cdf(p);
            assert!((cdf(x) - p).abs() <= 1e-14 * p.max(1e-3), "p={p}, x={x}");
        }
        assert_eq!(inverse_cdf(0.5), 0.0);
        assert!((inverse_cdf(0.975) - 1.959_963_984_540_054).abs() < 1e-12);
    }

    #[test]
    fn mass_of_whole_line_is_one() {
        assert!((mass(f64::NEG_INFINITY, f64::INFINITY) - 1.0).abs() < 1e-15);
        assert!((mass(1.0, 2.0) - (cdf(2.0) - cdf(1.0))).abs() < 1e-15);
    }
}

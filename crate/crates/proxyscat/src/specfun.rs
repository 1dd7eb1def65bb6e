//! Real-argument cylinder functions: Bessel J_n, Y_n and the Hankel
//! function H_n^(1) = J_n + i Y_n of integer order n >= 0.
//!
//! Order 0 and 1 come from libm (FDLIBM rational/asymptotic kernels).
//! Higher orders use three-term recurrences: upward for Y_n (stable, Y
//! grows with order) and either upward or Miller's normalized downward
//! recurrence for J_n depending on whether the order exceeds the argument.
//!
//! Values are validated against an extended-precision table generated by
//! `tools/gen_bessel_reference.py`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Consecutive-order Hankel values H_0 .. H_order_max at a fixed argument.
#[derive(Debug, Clone)]
pub struct CylinderSeq {
    pub order_max: usize,
    pub values: Vec<Complex64>,
}

impl CylinderSeq {
    pub fn get(&self, n: usize) -> Complex64 {
        self.values[n]
    }
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("{what} requires x > 0, got {x}")));
    }
    Ok(())
}

/// J_n(x) for n >= 0, x >= 0.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    match n {
        0 => Ok(libm::j0(x)),
        1 => Ok(libm::j1(x)),
        _ => Ok(bessel_j_seq(n, x)?[n]),
    }
}

/// Y_n(x) for n >= 0, x > 0.
pub fn bessel_y(n: usize, x: f64) -> Result<f64> {
    check_positive(x, "bessel_y")?;
    match n {
        0 => Ok(libm::y0(x)),
        1 => Ok(libm::y1(x)),
        _ => {
            let seq = bessel_y_seq(n, x)?;
            Ok(seq[n])
        }
    }
}

/// H_n^(1)(x) = J_n(x) + i Y_n(x).
pub fn hankel1(n: usize, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j(n, x)?, bessel_y(n, x)?))
}

/// J_0 .. J_n_max at argument x.
///
/// Upward recurrence from libm seeds while the order stays below the
/// argument; Miller's backward recurrence with Neumann-sum normalization
/// (J_0 + 2 J_2 + 2 J_4 + ... = 1) otherwise.
pub fn bessel_j_seq(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("bessel_j_seq requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    if (n_max as f64) + 2.0 <= x {
        // Every order in range sits in the oscillatory regime: upward is stable.
        let mut v = vec![0.0; n_max + 1];
        v[0] = libm::j0(x);
        if n_max >= 1 {
            v[1] = libm::j1(x);
        }
        for m in 1..n_max {
            v[m + 1] = (2.0 * m as f64 / x) * v[m] - v[m - 1];
        }
        return Ok(v);
    }
    // Miller: start well past the turning point so the trial solution has
    // shed any Y contamination by the time it reaches n_max.
    let m0 = n_max.max(x.ceil() as usize);
    let start = m0 + 24 + (16.0 * (m0 as f64).cbrt()) as usize;
    let mut out = vec![0.0; n_max + 1];
    let mut upper = 0.0_f64; // trial J_{m+1}
    let mut cur = 1e-200_f64; // trial J_m
    let mut norm = 0.0_f64; // Neumann sum accumulator
    let mut m = start;
    loop {
        if m <= n_max {
            out[m] = cur;
        }
        if m % 2 == 0 {
            norm += if m == 0 { cur } else { 2.0 * cur };
        }
        if m == 0 {
            break;
        }
        let lower = (2.0 * m as f64 / x) * cur - upper;
        upper = cur;
        cur = lower;
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            upper *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
        m -= 1;
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    Ok(out)
}

/// Y_0 .. Y_n_max at argument x > 0, by upward recurrence.
///
/// Errors with [`Error::Overflow`] if an element leaves f64 range.
pub fn bessel_y_seq(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_positive(x, "bessel_y_seq")?;
    let mut v = vec![0.0; n_max + 1];
    v[0] = libm::y0(x);
    if n_max >= 1 {
        v[1] = libm::y1(x);
    }
    for m in 1..n_max {
        v[m + 1] = (2.0 * m as f64 / x) * v[m] - v[m - 1];
        if !v[m + 1].is_finite() {
            return Err(Error::Overflow(format!("Y_{}({x})", m + 1)));
        }
    }
    Ok(v)
}

/// H_0^(1) .. H_order_max^(1) at argument x > 0.
pub fn hankel1_seq(order_max: usize, x: f64) -> Result<CylinderSeq> {
    check_positive(x, "hankel1_seq")?;
    let j = bessel_j_seq(order_max, x)?;
    let y = bessel_y_seq(order_max, x)?;
    let values = j
        .iter()
        .zip(y.iter())
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    Ok(CylinderSeq { order_max, values })
}

/// J_n'(x) from J_n' = (J_{n-1} - J_{n+1}) / 2, with J_0' = -J_1.
pub fn bessel_j_prime(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Ok(-bessel_j(1, x)?);
    }
    let seq = bessel_j_seq(n + 1, x)?;
    Ok(0.5 * (seq[n - 1] - seq[n + 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = include_str!("../tests/data/bessel_reference.txt");

    fn table() -> Vec<(usize, f64, f64, f64)> {
        TABLE
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let mut it = l.split_whitespace();
                let n: usize = it.next().unwrap().parse().unwrap();
                let x: f64 = it.next().unwrap().parse().unwrap();
                let j: f64 = it.next().unwrap().parse().unwrap();
                let y: f64 = it.next().unwrap().parse().unwrap();
                (n, x, j, y)
            })
            .collect()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn j_matches_reference_table() {
        for (n, x, jref, _) in table() {
            let j = bessel_j(n, x).unwrap();
            assert!(
                rel(j, jref) <= 1e-12,
                "J_{n}({x}): got {j}, want {jref}, rel {:.2e}",
                rel(j, jref)
            );
        }
    }

    #[test]
    fn y_matches_reference_table() {
        for (n, x, _, yref) in table() {
            let y = bessel_y(n, x).unwrap();
            assert!(
                rel(y, yref) <= 1e-12,
                "Y_{n}({x}): got {y}, want {yref}, rel {:.2e}",
                rel(y, yref)
            );
        }
    }

    #[test]
    fn j_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_y(0, 0.0).is_err());
        assert!(bessel_y(2, -3.0).is_err());
        assert!(hankel1_seq(4, 0.0).is_err());
    }

    #[test]
    fn wronskian_identity() {
        // J_{n+1} Y_n - J_n Y_{n+1} = 2 / (pi x)
        for &x in &[0.5, 1.0, 5.0, 10.0, 20.0, 100.0] {
            let j = bessel_j_seq(51, x).unwrap();
            let y = bessel_y_seq(51, x).unwrap();
            let expect = 2.0 / (std::f64::consts::PI * x);
            for n in 0..=50 {
                let w = j[n + 1] * y[n] - j[n] * y[n + 1];
                assert!(
                    (w - expect).abs() / expect <= 1e-10,
                    "wronskian n={n} x={x}: {w} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn three_term_recurrence_residual() {
        for &x in &[1.0, 2.5, 9.0, 42.0] {
            let j = bessel_j_seq(40, x).unwrap();
            let y = bessel_y_seq(40, x).unwrap();
            for n in 1..40 {
                let scale_j = j[n - 1].abs().max(j[n].abs()).max(j[n + 1].abs());
                let rj = (j[n + 1] - (2.0 * n as f64 / x) * j[n] + j[n - 1]).abs();
                assert!(rj <= 1e-10 * scale_j.max(1e-300), "J rec n={n} x={x}");
                let scale_y = y[n - 1].abs().max(y[n].abs()).max(y[n + 1].abs());
                let ry = (y[n + 1] - (2.0 * n as f64 / x) * y[n] + y[n - 1]).abs();
                assert!(ry <= 1e-10 * scale_y, "Y rec n={n} x={x}");
            }
        }
    }

    #[test]
    fn y0_small_argument_log_form() {
        // Y_0(x) - (2/pi) ln(x/2) stays bounded as x -> 0+.
        for &x in &[1e-3, 1e-6, 1e-9] {
            let y = bessel_y(0, x).unwrap();
            let log_part = (2.0 / std::f64::consts::PI) * (x / 2.0).ln();
            assert!((y - log_part).abs() < 1.0, "x={x}: {}", y - log_part);
        }
    }

    #[test]
    fn hankel_definition_and_recurrence() {
        let h0 = hankel1(0, 1.0).unwrap();
        assert_eq!(h0.re, libm::j0(1.0));
        assert_eq!(h0.im, libm::y0(1.0));

        let x = 5.0;
        let h = hankel1_seq(2, x).unwrap();
        let r = h.get(2) - ((2.0 / x) * h.get(1) - h.get(0));
        assert!(r.norm() <= 1e-12 * h.get(2).norm());
    }

    #[test]
    fn hankel_far_field_magnitude() {
        let x = 1e3;
        let h = hankel1(0, x).unwrap();
        let target = (2.0 / std::f64::consts::PI).sqrt();
        assert!((h.norm() * x.sqrt() - target).abs() < 1e-6);
    }

    #[test]
    fn hankel_seq_matches_elementwise() {
        let x = 7.0;
        let seq = hankel1_seq(30, x).unwrap();
        for n in 0..=30 {
            let h = hankel1(n, x).unwrap();
            assert!((seq.get(n) - h).norm() <= 1e-12 * h.norm(), "n={n}");
        }
        let single = hankel1_seq(0, x).unwrap();
        assert_eq!(single.values.len(), 1);
        assert_eq!(single.get(0), hankel1(0, x).unwrap());
    }

    #[test]
    fn hankel_seq_finite_at_small_argument() {
        let seq = hankel1_seq(40, 0.1).unwrap();
        for (n, v) in seq.values.iter().enumerate() {
            assert!(v.re.is_finite() && v.im.is_finite(), "n={n}");
        }
    }

    #[test]
    fn j_prime_consistency() {
        for &(n, x) in &[(0usize, 1.3), (3, 4.0), (10, 7.5)] {
            let h = 1e-6;
            let fd = (bessel_j(n, x + h).unwrap() - bessel_j(n, x - h).unwrap()) / (2.0 * h);
            let d = bessel_j_prime(n, x).unwrap();
            assert!((fd - d).abs() <= 1e-8, "n={n} x={x}: {fd} vs {d}");
        }
    }

    proptest::proptest! {
        #[test]
        fn j_bounded_by_one(x in 0.0_f64..500.0, n in 0usize..100) {
            let j = bessel_j(n, x).unwrap();
            proptest::prop_assert!(j.abs() <= 1.0 + 1e-14);
        }
    }
}

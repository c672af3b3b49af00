//! Engineering design problems and the damped-sinusoid regression family.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use libm::{exp, sin, sqrt};

use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::Real;

use super::{scalar, Constraint, ProblemSpec};

fn spec(name: &str, lower: Vec<f64>, upper: Vec<f64>, f: super::ScalarFn) -> ProblemSpec {
    ProblemSpec::new(name, lower, upper, f).expect("registered bounds are valid")
}

/// Tension/compression spring weight.
pub(super) fn tension_spring() -> ProblemSpec {
    let f = scalar(|x| x[0] * x[0] * x[1] * (x[2] + 2.0));
    spec(
        "tension_spring",
        vec![0.05, 0.25, 2.0],
        vec![0.2, 1.3, 15.0],
        f,
    )
    .with_inequality(Constraint::general(|x| {
        1.0 - x[1].powi(3) * x[2] / (71875.0 * x[0].powi(4))
    }))
    .with_inequality(Constraint::general(|x| {
        let (d, big_d) = (x[0], x[1]);
        big_d * (4.0 * big_d - d) / (12566.0 * d.powi(3) * (big_d - d)) + 2.46 / (12566.0 * d * d)
            - 1.0
    }))
    .with_inequality(Constraint::general(|x| {
        1.0 - 140.54 * x[0] / (x[2] * x[1] * x[1])
    }))
    .with_inequality(Constraint::general(|x| (x[0] + x[1]) / 1.5 - 1.0))
    .with_known(
        0.012_679_31,
        Some(vec![0.051_705_17, 0.357_100_42, 11.281_206_72]),
    )
    .with_active(vec![0, 1])
}

/// Three-bar truss volume.
pub(super) fn three_bar_truss() -> ProblemSpec {
    let f = scalar(|x| 100.0 * (2.0 * SQRT_2 * x[0] + x[1]));
    spec("three_bar_truss", vec![0.0, 0.0], vec![1.0, 1.0], f)
        .with_inequality(Constraint::general(|x| {
            (SQRT_2 * x[0] + x[1]) / (SQRT_2 * x[0] * x[0] + 2.0 * x[0] * x[1]) * 2.0 - 2.0
        }))
        .with_inequality(Constraint::general(|x| {
            x[1] / (SQRT_2 * x[0] * x[0] + 2.0 * x[0] * x[1]) * 2.0 - 2.0
        }))
        .with_inequality(Constraint::general(|x| {
            1.0 / (x[0] + SQRT_2 * x[1]) * 2.0 - 2.0
        }))
        .with_known(263.895_845_35, Some(vec![0.788_675_12, 0.408_248_32]))
        .with_active(vec![0])
}

/// Speed reducer weight.
#[allow(clippy::approx_constant)]
pub(super) fn speed_reducer() -> ProblemSpec {
    let f = scalar(|x| {
        let (x1, x2, x3, x4, x5, x6, x7) = (x[0], x[1], x[2], x[3], x[4], x[5], x[6]);
        0.7854 * x1 * x2 * x2 * (3.3333 * x3 * x3 + 14.9334 * x3 - 43.0934)
            - 1.508 * x1 * (x6 * x6 + x7 * x7)
            + 7.4777 * (x6.powi(3) + x7.powi(3))
            + 0.7854 * (x4 * x6 * x6 + x5 * x7 * x7)
    });
    spec(
        "speed_reducer",
        vec![2.6, 0.7, 17.0, 7.3, 7.8, 2.9, 5.0],
        vec![3.6, 0.8, 28.0, 8.3, 8.3, 3.9, 5.5],
        f,
    )
    .with_inequality(Constraint::general(|x| {
        27.0 / (x[0] * x[1] * x[1] * x[2]) - 1.0
    }))
    .with_inequality(Constraint::general(|x| {
        397.5 / (x[0] * x[1] * x[1] * x[2] * x[2]) - 1.0
    }))
    .with_inequality(Constraint::general(|x| {
        1.93 * x[3].powi(3) / (x[1] * x[2] * x[5].powi(4)) - 1.0
    }))
    .with_inequality(Constraint::general(|x| {
        1.93 * x[4].powi(3) / (x[1] * x[2] * x[6].powi(4)) - 1.0
    }))
    .with_inequality(Constraint::general(|x| {
        let a = 745.0 * x[3] / (x[1] * x[2]);
        sqrt(a * a + 16.9e6) / (110.0 * x[5].powi(3)) - 1.0
    }))
    .with_inequality(Constraint::general(|x| {
        let a = 745.0 * x[4] / (x[1] * x[2]);
        sqrt(a * a + 157.5e6) / (85.0 * x[6].powi(3)) - 1.0
    }))
    .with_inequality(Constraint::general(|x| x[1] * x[2] / 40.0 - 1.0))
    .with_inequality(Constraint::general(|x| 5.0 * x[1] / x[0] - 1.0))
    .with_inequality(Constraint::general(|x| x[0] / (12.0 * x[1]) - 1.0))
    .with_inequality(Constraint::general(|x| (1.5 * x[5] + 1.9) / x[3] - 1.0))
    .with_inequality(Constraint::general(|x| (1.1 * x[6] + 1.9) / x[4] - 1.0))
    .with_known(
        2_996.348_176_13,
        Some(vec![3.5, 0.7, 17.0, 7.3, 7.8, 3.350_214_68, 5.286_683_23]),
    )
    .with_active(vec![4, 5, 7])
}

/// Pressure vessel cost.
pub(super) fn pressure_vessel() -> ProblemSpec {
    let f = scalar(|x| {
        0.6224 * x[0] * x[2] * x[3]
            + 1.7781 * x[1] * x[2] * x[2]
            + 3.1661 * x[0] * x[0] * x[3]
            + 19.84 * x[0] * x[0] * x[2]
    });
    spec(
        "pressure_vessel",
        vec![1.0, 0.625, 25.0, 25.0],
        vec![1.375, 1.0, 150.0, 240.0],
        f,
    )
    .with_inequality(Constraint::affine(vec![-1.0, 0.0, 0.0193, 0.0], 0.0))
    .with_inequality(Constraint::affine(vec![0.0, -1.0, 0.00954, 0.0], 0.0))
    .with_inequality(Constraint::general(|x| {
        -PI * x[2] * x[2] * x[3] - 4.0 / 3.0 * PI * x[2].powi(3) + 1_296_000.0
    }))
    .with_inequality(Constraint::affine(vec![0.0, 0.0, 0.0, 1.0], -240.0))
    .with_inequality(Constraint::affine(vec![-1.0, 0.0, 0.0, 0.0], 1.1))
    .with_inequality(Constraint::affine(vec![0.0, -1.0, 0.0, 0.0], 0.6))
    .with_known(
        7_163.739_571_63,
        Some(vec![1.1, 0.625, 56.994_818_66, 51.001_251_65]),
    )
    .with_active(vec![0, 2, 4])
}

const BEAM_P: f64 = 6000.0;
const BEAM_L: f64 = 14.0;
const BEAM_E: f64 = 30e6;
const BEAM_G: f64 = 12e6;

fn beam_tau(x: &[f64]) -> f64 {
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    let tau1 = BEAM_P / (SQRT_2 * x1 * x2);
    let m = BEAM_P * (BEAM_L + x2 / 2.0);
    let half = (x1 + x3) / 2.0;
    let r = sqrt(x2 * x2 / 4.0 + half * half);
    let j = 2.0 * SQRT_2 * x1 * x2 * (x2 * x2 / 12.0 + half * half);
    let tau2 = m * r / j;
    sqrt(tau1 * tau1 + tau1 * tau2 * x2 / r + tau2 * tau2)
}

/// Welded beam fabrication cost.
pub(super) fn welded_beam() -> ProblemSpec {
    let f = scalar(|x| 1.10471 * x[0] * x[0] * x[1] + 0.04811 * x[2] * x[3] * (14.0 + x[1]));
    spec(
        "welded_beam",
        vec![0.1, 0.1, 0.1, 0.1],
        vec![2.0, 10.0, 10.0, 2.0],
        f,
    )
    .with_inequality(Constraint::general(|x| beam_tau(x) - 13600.0))
    .with_inequality(Constraint::general(|x| {
        6.0 * BEAM_P * BEAM_L / (x[3] * x[2] * x[2]) - 30000.0
    }))
    .with_inequality(Constraint::affine(vec![1.0, 0.0, 0.0, -1.0], 0.0))
    .with_inequality(Constraint::general(|x| {
        0.10471 * x[0] * x[0] + 0.04811 * x[2] * x[3] * (14.0 + x[1]) - 5.0
    }))
    .with_inequality(Constraint::general(|x| {
        4.0 * BEAM_P * BEAM_L.powi(3) / (BEAM_E * x[3] * x[2].powi(3)) - 0.25
    }))
    .with_inequality(Constraint::general(|x| {
        let pc = 4.013 * BEAM_E * sqrt(x[2] * x[2] * x[3].powi(6) / 36.0) / (BEAM_L * BEAM_L)
            * (1.0 - x[2] / (2.0 * BEAM_L) * sqrt(BEAM_E / (4.0 * BEAM_G)));
        BEAM_P - pc
    }))
    .with_inequality(Constraint::affine(vec![-1.0, 0.0, 0.0, 0.0], 0.125))
    .with_known(
        1.724_884_30,
        Some(vec![0.205_725_51, 3.470_620_57, 9.036_664_56, 0.205_731_41]),
    )
    .with_active(vec![2])
}

const REGRESSION_OPTIMA: [[f64; 9]; 3] = [
    [-0.2, 0.4, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.2, 0.4, 0.3, -0.3, 0.3, 0.1, 0.0, 0.0, 0.0],
    [-0.4, 0.6, 0.2, -0.3, 0.3, 0.1, -0.2, 0.4, 0.3],
];

fn sinusoid_sum(params: &[f64], t: f64) -> f64 {
    params
        .chunks_exact(3)
        .map(|p| exp(p[0] * t) * sin(2.0 * PI * t * p[1] + p[2]))
        .sum()
}

/// Least-squares fit of `s` damped sinusoids to `t_max` noiseless observations.
///
/// Each sinusoid contributes a damping `d in [-1, 0]`, a frequency
/// `w in [0, 1]` and a phase `theta in [0, 1]`; the observations are generated
/// by the reference parameters, so the optimal value is zero.
pub fn regression_problem(s: usize, t_max: usize) -> Result<ProblemSpec> {
    if !(1..=3).contains(&s) || t_max == 0 {
        return Err(Error::InvalidArgument(format!(
            "regression needs 1 <= s <= 3 and T >= 1, got s = {s}, T = {t_max}"
        )));
    }
    let n = 3 * s;
    let xstar = REGRESSION_OPTIMA[s - 1][..n].to_vec();
    let observed: Vec<f64> = (1..=t_max)
        .map(|t| sinusoid_sum(&xstar, t as f64))
        .collect();
    let f = scalar(move |x| {
        observed
            .iter()
            .enumerate()
            .map(|(i, y)| {
                let r = y - sinusoid_sum(x, (i + 1) as f64);
                r * r
            })
            .sum()
    });
    let lower = (0..n)
        .map(|i| if i % 3 == 0 { -1.0 } else { 0.0 })
        .collect();
    let upper = (0..n).map(|i| if i % 3 == 0 { 0.0 } else { 1.0 }).collect();
    Ok(spec(&format!("regression_s{s}_t{t_max}"), lower, upper, f).with_known(0.0, Some(xstar)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{evaluate_constraints, evaluate_objective};

    fn check_known(p: &ProblemSpec, rel: f64) {
        let k = p.known.as_ref().unwrap();
        let x = k.x.as_ref().unwrap();
        let f = evaluate_objective(p, x).unwrap();
        assert!(
            (f - k.f).abs() <= rel * k.f.abs().max(1e-300),
            "{}: f(x*) = {f}, expected {}",
            p.name,
            k.f
        );
    }

    #[test]
    fn engineering_optima_match_reference_values() {
        for p in [
            tension_spring(),
            three_bar_truss(),
            speed_reducer(),
            pressure_vessel(),
            welded_beam(),
        ] {
            check_known(&p, 1e-5);
            let g =
                evaluate_constraints(&p, p.known.as_ref().unwrap().x.as_ref().unwrap()).unwrap();
            assert!(
                g.inequalities.iter().all(|v| *v <= 1e-3),
                "{}: {:?}",
                p.name,
                g
            );
        }
    }

    #[test]
    fn regression_is_zero_at_reference_parameters() {
        for s in 1..=3 {
            for t in [10, 100] {
                let p = regression_problem(s, t).unwrap();
                assert_eq!(p.dim(), 3 * s);
                let f =
                    evaluate_objective(&p, p.known.as_ref().unwrap().x.as_ref().unwrap()).unwrap();
                assert!(f.abs() < 1e-20, "s={s} T={t}: {f}");
            }
        }
        assert!(regression_problem(4, 10).is_err());
    }

    #[test]
    fn truss_boundary_evaluates_without_panicking() {
        let p = three_bar_truss();
        let g = evaluate_constraints(&p, &[0.0, 0.0]).unwrap();
        assert!(g.inequalities.iter().any(|v| !v.is_finite()));
        assert!(p.violation_unchecked(&[0.0, 0.0]).is_infinite());
    }
}

//! Classic box-constrained, linearly constrained and nonlinearly constrained test functions.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, exp, fabs, sin, sqrt};

#[allow(unused_imports)]
use crate::math::Real;

use super::{scalar, Constraint, ProblemSpec};

fn spec(name: &str, lower: Vec<f64>, upper: Vec<f64>, f: super::ScalarFn) -> ProblemSpec {
    ProblemSpec::new(name, lower, upper, f).expect("registered bounds are valid")
}

fn cube(name: &str, n: usize, lo: f64, hi: f64, f: super::ScalarFn) -> ProblemSpec {
    spec(name, vec![lo; n], vec![hi; n], f)
}

pub(super) fn branin() -> ProblemSpec {
    let f = scalar(|x| {
        let a = x[1] - 5.1 / (4.0 * PI * PI) * x[0] * x[0] + 5.0 / PI * x[0] - 6.0;
        a * a + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * cos(x[0]) + 10.0
    });
    spec("branin", vec![-5.0, 0.0], vec![10.0, 15.0], f)
        .with_known(0.397_887_357_729_738_2, Some(vec![PI, 2.275]))
}

pub(super) fn six_hump_camel() -> ProblemSpec {
    let f = scalar(|x| {
        let (a, b) = (x[0], x[1]);
        (4.0 - 2.1 * a * a + a * a * a * a / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
    });
    spec("six_hump_camel", vec![-3.0, -2.0], vec![3.0, 2.0], f).with_known(
        -1.031_628_453_489_877,
        Some(vec![0.089_842_008_935_272_6, -0.712_656_403_020_574_2]),
    )
}

pub(super) fn goldstein_price() -> ProblemSpec {
    let f = scalar(|x| {
        let (a, b) = (x[0], x[1]);
        let p = 1.0
            + (a + b + 1.0).powi(2)
                * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
        let q = 30.0
            + (2.0 * a - 3.0 * b).powi(2)
                * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
        p * q
    });
    cube("goldstein_price", 2, -2.0, 2.0, f).with_known(3.0, Some(vec![0.0, -1.0]))
}

pub(super) fn shubert() -> ProblemSpec {
    let f = scalar(|x| {
        x.iter()
            .map(|&v| {
                (1..=5)
                    .map(|j| j as f64 * cos((j as f64 + 1.0) * v + j as f64))
                    .sum::<f64>()
            })
            .product()
    });
    cube("shubert", 2, -10.0, 10.0, f)
        .with_known(
            -186.730_908_831_024,
            Some(vec![-7.083_506_407_401_9, 4.858_056_878_468_9]),
        )
        .with_symmetry()
}

pub(super) fn beale() -> ProblemSpec {
    let f = scalar(|x| {
        let (a, b) = (x[0], x[1]);
        (1.5 - a + a * b).powi(2)
            + (2.25 - a + a * b * b).powi(2)
            + (2.625 - a + a * b * b * b).powi(2)
    });
    cube("beale", 2, -4.5, 4.5, f).with_known(0.0, Some(vec![3.0, 0.5]))
}

pub(super) fn booth() -> ProblemSpec {
    let f = scalar(|x| (x[0] + 2.0 * x[1] - 7.0).powi(2) + (2.0 * x[0] + x[1] - 5.0).powi(2));
    cube("booth", 2, -10.0, 10.0, f).with_known(0.0, Some(vec![1.0, 3.0]))
}

pub(super) fn bohachevsky1() -> ProblemSpec {
    let f = scalar(|x| {
        x[0] * x[0] + 2.0 * x[1] * x[1] - 0.3 * cos(3.0 * PI * x[0]) - 0.4 * cos(4.0 * PI * x[1])
            + 0.7
    });
    cube("bohachevsky1", 2, -100.0, 100.0, f).with_known(0.0, Some(vec![0.0, 0.0]))
}

pub(super) fn easom() -> ProblemSpec {
    let f = scalar(|x| {
        let d = (x[0] - PI).powi(2) + (x[1] - PI).powi(2);
        -cos(x[0]) * cos(x[1]) * exp(-d)
    });
    cube("easom", 2, -100.0, 100.0, f).with_known(-1.0, Some(vec![PI, PI]))
}

#[allow(clippy::approx_constant)]
pub(super) fn michalewicz2() -> ProblemSpec {
    let f = scalar(|x| {
        -x.iter()
            .enumerate()
            .map(|(i, &v)| sin(v) * sin((i as f64 + 1.0) * v * v / PI).powi(20))
            .sum::<f64>()
    });
    cube("michalewicz", 2, 0.0, PI, f).with_known(
        -1.801_303_410_098_554,
        Some(vec![2.202_905_520_569_41, 1.570_796_326_794_9]),
    )
}

const HARTMAN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const HARTMAN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.038150, 0.5743, 0.8828],
];
const HARTMAN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMAN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];
const HARTMAN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

fn hartman<const N: usize>(x: &[f64], a: &[[f64; N]; 4], p: &[[f64; N]; 4]) -> f64 {
    -(0..4)
        .map(|i| {
            let s: f64 = (0..N).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            HARTMAN_C[i] * exp(-s)
        })
        .sum::<f64>()
}

pub(super) fn hartman3() -> ProblemSpec {
    let f = scalar(|x| hartman(x, &HARTMAN3_A, &HARTMAN3_P));
    cube("hartman3", 3, 0.0, 1.0, f).with_known(
        -3.862_782_147_820_755,
        Some(vec![
            0.114_614_339_099_8,
            0.555_648_773_740_2,
            0.852_546_983_815_3,
        ]),
    )
}

pub(super) fn hartman6() -> ProblemSpec {
    let f = scalar(|x| hartman(x, &HARTMAN6_A, &HARTMAN6_P));
    cube("hartman6", 6, 0.0, 1.0, f).with_known(
        -3.322_368_011_415_515,
        Some(vec![
            0.201_689_511_010_837,
            0.150_010_623_206_15,
            0.476_873_974_883_29,
            0.275_332_430_918_31,
            0.311_651_618_359_1,
            0.657_300_534_604_1,
        ]),
    )
}

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];
const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

pub(super) fn shekel(m: usize) -> ProblemSpec {
    let f = scalar(move |x| {
        -(0..m)
            .map(|i| {
                let s: f64 = (0..4).map(|j| (x[j] - SHEKEL_A[i][j]).powi(2)).sum();
                1.0 / (s + SHEKEL_C[i])
            })
            .sum::<f64>()
    });
    let (name, fstar, xstar) = match m {
        5 => (
            "shekel5",
            -10.153_199_679_058_23,
            [
                4.000_037_152_58,
                4.000_133_276_58,
                4.000_037_152_58,
                4.000_133_276_58,
            ],
        ),
        7 => (
            "shekel7",
            -10.402_940_566_818_66,
            [
                4.000_572_907_55,
                4.000_689_357_37,
                3.999_489_712_08,
                3.999_606_161_89,
            ],
        ),
        _ => (
            "shekel10",
            -10.536_409_816_692_05,
            [
                4.000_746_531_76,
                4.000_592_934_93,
                3.999_663_401_39,
                3.999_509_804_56,
            ],
        ),
    };
    cube(name, 4, 0.0, 10.0, f).with_known(fstar, Some(xstar.to_vec()))
}

pub(super) fn rosenbrock(n: usize) -> ProblemSpec {
    let f = scalar(|x| {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum()
    });
    cube("rosenbrock", n, -5.0, 10.0, f).with_known(0.0, Some(vec![1.0; n]))
}

pub(super) fn alpine(n: usize) -> ProblemSpec {
    let f = scalar(|x| x.iter().map(|&v| fabs(v * sin(v) + 0.1 * v)).sum());
    cube("alpine", n, -10.0, 10.0, f)
        .with_known(0.0, Some(vec![0.0; n]))
        .with_symmetry()
}

pub(super) fn csendes(n: usize) -> ProblemSpec {
    let f = scalar(|x| {
        x.iter()
            .map(|&v| {
                if v == 0.0 {
                    0.0
                } else {
                    v.powi(6) * (2.0 + sin(1.0 / v))
                }
            })
            .sum()
    });
    cube("csendes", n, -1.0, 1.0, f)
        .with_known(0.0, Some(vec![0.0; n]))
        .with_symmetry()
}

pub(super) fn griewank(n: usize) -> ProblemSpec {
    let f = scalar(|x| {
        let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
        let p: f64 = x
            .iter()
            .enumerate()
            .map(|(i, &v)| cos(v / sqrt(i as f64 + 1.0)))
            .product();
        s - p + 1.0
    });
    cube("griewank", n, -600.0, 600.0, f).with_known(0.0, Some(vec![0.0; n]))
}

pub(super) fn rastrigin(n: usize) -> ProblemSpec {
    let f = scalar(|x| {
        10.0 * x.len() as f64
            + x.iter()
                .map(|&v| v * v - 10.0 * cos(2.0 * PI * v))
                .sum::<f64>()
    });
    cube("rastrigin", n, -5.12, 5.12, f)
        .with_known(0.0, Some(vec![0.0; n]))
        .with_symmetry()
}

pub(super) fn styblinski_tang(n: usize) -> ProblemSpec {
    let f = scalar(|x| {
        0.5 * x
            .iter()
            .map(|&v| v.powi(4) - 16.0 * v * v + 5.0 * v)
            .sum::<f64>()
    });
    let xs = -2.903_534_027_771_177_6;
    let per = 0.5 * (xs * xs * xs * xs - 16.0 * xs * xs + 5.0 * xs);
    cube("styblinski_tang", n, -5.0, 5.0, f)
        .with_known(per * n as f64, Some(vec![xs; n]))
        .with_symmetry()
}

pub(super) fn levy(n: usize) -> ProblemSpec {
    let f = scalar(|x| {
        let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
        let last = w[w.len() - 1];
        let mut s = sin(PI * w[0]).powi(2);
        for wi in &w[..w.len() - 1] {
            s += (wi - 1.0).powi(2) * (1.0 + 10.0 * sin(PI * wi + 1.0).powi(2));
        }
        s + (last - 1.0).powi(2) * (1.0 + sin(2.0 * PI * last).powi(2))
    });
    cube("levy", n, -10.0, 10.0, f).with_known(0.0, Some(vec![1.0; n]))
}

pub(super) fn zakharov(n: usize) -> ProblemSpec {
    let f = scalar(|x| {
        let s1: f64 = x.iter().map(|v| v * v).sum();
        let s2: f64 = x
            .iter()
            .enumerate()
            .map(|(i, v)| 0.5 * (i as f64 + 1.0) * v)
            .sum();
        s1 + s2 * s2 + s2.powi(4)
    });
    cube("zakharov", n, -5.0, 10.0, f).with_known(0.0, Some(vec![0.0; n]))
}

// Linearly constrained problems (Hock-Schittkowski numbering).

pub(super) fn hs21() -> ProblemSpec {
    let f = scalar(|x| 0.01 * x[0] * x[0] + x[1] * x[1] - 100.0);
    spec("hs21", vec![2.0, -50.0], vec![50.0, 50.0], f)
        .with_inequality(Constraint::affine(vec![-10.0, 1.0], 10.0))
        .with_known(-99.96, Some(vec![2.0, 0.0]))
        .with_active(vec![0])
}

pub(super) fn hs24() -> ProblemSpec {
    let s3 = sqrt(3.0);
    let f = scalar(move |x| ((x[0] - 3.0).powi(2) - 9.0) * x[1].powi(3) / (27.0 * s3));
    spec("hs24", vec![0.0, 0.0], vec![6.0, 6.0], f)
        .with_inequality(Constraint::affine(vec![-1.0 / s3, 1.0], 0.0))
        .with_inequality(Constraint::affine(vec![-1.0, -s3], 0.0))
        .with_inequality(Constraint::affine(vec![1.0, s3], -6.0))
        .with_known(-1.0, Some(vec![3.0, s3]))
        .with_active(vec![0, 2])
}

pub(super) fn hs35() -> ProblemSpec {
    let f = scalar(|x| {
        let (a, b, c) = (x[0], x[1], x[2]);
        9.0 - 8.0 * a - 6.0 * b - 4.0 * c
            + 2.0 * a * a
            + 2.0 * b * b
            + c * c
            + 2.0 * a * b
            + 2.0 * a * c
    });
    spec("hs35", vec![0.0; 3], vec![3.0; 3], f)
        .with_inequality(Constraint::affine(vec![1.0, 1.0, 2.0], -3.0))
        .with_known(1.0 / 9.0, Some(vec![4.0 / 3.0, 7.0 / 9.0, 4.0 / 9.0]))
        .with_active(vec![0])
}

pub(super) fn hs36() -> ProblemSpec {
    let f = scalar(|x| -x[0] * x[1] * x[2]);
    spec("hs36", vec![0.0; 3], vec![20.0, 11.0, 42.0], f)
        .with_inequality(Constraint::affine(vec![1.0, 2.0, 2.0], -72.0))
        .with_known(-3300.0, Some(vec![20.0, 11.0, 15.0]))
        .with_active(vec![0])
}

pub(super) fn hs37() -> ProblemSpec {
    let f = scalar(|x| -x[0] * x[1] * x[2]);
    spec("hs37", vec![0.0; 3], vec![42.0; 3], f)
        .with_inequality(Constraint::affine(vec![1.0, 2.0, 2.0], -72.0))
        .with_inequality(Constraint::affine(vec![-1.0, -2.0, -2.0], 0.0))
        .with_known(-3456.0, Some(vec![24.0, 12.0, 12.0]))
        .with_active(vec![0])
}

// Nonlinearly constrained problems.

pub(super) fn g06() -> ProblemSpec {
    let f = scalar(|x| (x[0] - 10.0).powi(3) + (x[1] - 20.0).powi(3));
    spec("g06", vec![13.0, 0.0], vec![100.0, 100.0], f)
        .with_inequality(Constraint::general(|x| {
            -(x[0] - 5.0).powi(2) - (x[1] - 5.0).powi(2) + 100.0
        }))
        .with_inequality(Constraint::general(|x| {
            (x[0] - 6.0).powi(2) + (x[1] - 5.0).powi(2) - 82.81
        }))
        .with_known(
            -6_961.813_875_580_138,
            Some(vec![14.095, 0.842_960_789_215_479_6]),
        )
        .with_active(vec![0, 1])
}

pub(super) fn g08() -> ProblemSpec {
    let f = scalar(|x| {
        let num = sin(2.0 * PI * x[0]).powi(3) * sin(2.0 * PI * x[1]);
        -num / (x[0].powi(3) * (x[0] + x[1]))
    });
    spec("g08", vec![0.0, 0.0], vec![10.0, 10.0], f)
        .with_inequality(Constraint::general(|x| x[0] * x[0] - x[1] + 1.0))
        .with_inequality(Constraint::general(|x| 1.0 - x[0] + (x[1] - 4.0).powi(2)))
        .with_known(
            -0.095_825_041_418_035_9,
            Some(vec![1.227_971_352_607_526, 4.245_373_366_122_749]),
        )
}

pub(super) fn hs6() -> ProblemSpec {
    let f = scalar(|x| (1.0 - x[0]).powi(2));
    spec("hs6", vec![-2.0, -2.0], vec![2.0, 2.0], f)
        .with_equality(Constraint::general(|x| 10.0 * (x[1] - x[0] * x[0])))
        .with_known(0.0, Some(vec![1.0, 1.0]))
}

//! Named problem registry and benchmark suites.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

use super::{classic, engineering, hidden_feasibility, rebound, ProblemSpec, EPS_H};

const SCALABLE_DIMS: &[usize] = &[2, 3, 5, 10];

enum Builder {
    Fixed(usize, fn() -> ProblemSpec),
    Scalable(fn(usize) -> ProblemSpec),
    Regression(usize, usize),
}

struct Entry {
    name: &'static str,
    builder: Builder,
}

const fn fixed(name: &'static str, n: usize, f: fn() -> ProblemSpec) -> Entry {
    Entry {
        name,
        builder: Builder::Fixed(n, f),
    }
}

const fn scalable(name: &'static str, f: fn(usize) -> ProblemSpec) -> Entry {
    Entry {
        name,
        builder: Builder::Scalable(f),
    }
}

const fn regression(name: &'static str, s: usize, t: usize) -> Entry {
    Entry {
        name,
        builder: Builder::Regression(s, t),
    }
}

static ENTRIES: &[Entry] = &[
    fixed("branin", 2, classic::branin),
    fixed("six_hump_camel", 2, classic::six_hump_camel),
    fixed("goldstein_price", 2, classic::goldstein_price),
    fixed("shubert", 2, classic::shubert),
    fixed("beale", 2, classic::beale),
    fixed("booth", 2, classic::booth),
    fixed("bohachevsky1", 2, classic::bohachevsky1),
    fixed("easom", 2, classic::easom),
    fixed("michalewicz", 2, classic::michalewicz2),
    fixed("hartman3", 3, classic::hartman3),
    fixed("hartman6", 6, classic::hartman6),
    fixed("shekel5", 4, || classic::shekel(5)),
    fixed("shekel7", 4, || classic::shekel(7)),
    fixed("shekel10", 4, || classic::shekel(10)),
    scalable("rosenbrock", classic::rosenbrock),
    scalable("alpine", classic::alpine),
    scalable("csendes", classic::csendes),
    scalable("griewank", classic::griewank),
    scalable("rastrigin", classic::rastrigin),
    scalable("styblinski_tang", classic::styblinski_tang),
    scalable("levy", classic::levy),
    scalable("zakharov", classic::zakharov),
    fixed("hs21", 2, classic::hs21),
    fixed("hs24", 2, classic::hs24),
    fixed("hs35", 3, classic::hs35),
    fixed("hs36", 3, classic::hs36),
    fixed("hs37", 3, classic::hs37),
    fixed("g06", 2, classic::g06),
    fixed("g08", 2, classic::g08),
    fixed("hs6", 2, classic::hs6),
    fixed("tension_spring", 3, engineering::tension_spring),
    fixed("three_bar_truss", 2, engineering::three_bar_truss),
    fixed("speed_reducer", 7, engineering::speed_reducer),
    fixed("pressure_vessel", 4, engineering::pressure_vessel),
    fixed("welded_beam", 4, engineering::welded_beam),
    regression("regression_s1_t10", 1, 10),
    regression("regression_s1_t100", 1, 100),
    regression("regression_s2_t10", 2, 10),
    regression("regression_s2_t100", 2, 100),
    regression("regression_s3_t10", 3, 10),
    regression("regression_s3_t100", 3, 100),
];

/// Names of every registered problem, including `_hidden` wrappers of constrained ones.
pub fn problem_names() -> Vec<String> {
    let mut out: Vec<String> = ENTRIES.iter().map(|e| e.name.to_string()).collect();
    for e in ENTRIES {
        if let Builder::Fixed(_, f) = e.builder {
            if f().is_constrained() {
                out.push(format!("{}_hidden", e.name));
            }
        }
    }
    out
}

/// Looks up a registered problem.
///
/// Scalable problems accept `n` in {2, 3, 5, 10} and default to 2. Fixed-size
/// problems reject any other `n`. A `_hidden` suffix wraps a constrained
/// problem behind a feasibility oracle.
pub fn lookup_problem(name: &str, n: Option<usize>) -> Result<ProblemSpec> {
    if let Some(base) = name.strip_suffix("_hidden") {
        let inner = lookup_problem(base, n)?;
        if !inner.is_constrained() {
            return Err(Error::UnknownProblem { name: name.into() });
        }
        return Ok(hidden_feasibility(&inner, EPS_H));
    }
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownProblem { name: name.into() })?;
    let unsupported = |n| Error::UnsupportedDimension {
        name: name.into(),
        n,
    };
    match entry.builder {
        Builder::Fixed(dim, f) => match n {
            Some(k) if k != dim => Err(unsupported(k)),
            _ => Ok(f()),
        },
        Builder::Scalable(f) => {
            let k = n.unwrap_or(SCALABLE_DIMS[0]);
            if SCALABLE_DIMS.contains(&k) {
                Ok(f(k))
            } else {
                Err(unsupported(k))
            }
        }
        Builder::Regression(s, t) => match n {
            Some(k) if k != 3 * s => Err(unsupported(k)),
            _ => engineering::regression_problem(s, t),
        },
    }
}

/// Benchmark suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Ten box problems with `n <= 4`.
    Box,
    /// Linearly constrained problems.
    Linear,
    /// Nonlinearly constrained problems.
    Nonlinear,
    /// Hidden-constraint wrappers of the linear and nonlinear suites.
    Hidden,
    /// Five engineering designs plus six regression instances.
    Engineering,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "box" => Some(Suite::Box),
            "linear" => Some(Suite::Linear),
            "nonlinear" => Some(Suite::Nonlinear),
            "hidden" => Some(Suite::Hidden),
            "engineering" => Some(Suite::Engineering),
            _ => None,
        }
    }
}

const BOX_SUITE: &[&str] = &[
    "branin",
    "six_hump_camel",
    "goldstein_price",
    "shubert",
    "hartman3",
    "shekel5",
    "shekel7",
    "shekel10",
    "rosenbrock",
    "beale",
];
const LINEAR_SUITE: &[&str] = &["hs21", "hs24", "hs35", "hs36", "hs37"];
const NONLINEAR_SUITE: &[&str] = &[
    "g06",
    "g08",
    "hs6",
    "tension_spring",
    "three_bar_truss",
    "speed_reducer",
    "pressure_vessel",
    "welded_beam",
];
const ENGINEERING_SUITE: &[&str] = &[
    "tension_spring",
    "three_bar_truss",
    "speed_reducer",
    "pressure_vessel",
    "welded_beam",
    "regression_s1_t10",
    "regression_s1_t100",
    "regression_s2_t10",
    "regression_s2_t100",
    "regression_s3_t10",
    "regression_s3_t100",
];

/// Problems of a suite, in a fixed order.
pub fn suite(which: Suite) -> Vec<ProblemSpec> {
    let names: Vec<String> = match which {
        Suite::Box => BOX_SUITE.iter().map(|s| s.to_string()).collect(),
        Suite::Linear => LINEAR_SUITE.iter().map(|s| s.to_string()).collect(),
        Suite::Nonlinear => NONLINEAR_SUITE.iter().map(|s| s.to_string()).collect(),
        Suite::Hidden => LINEAR_SUITE
            .iter()
            .chain(NONLINEAR_SUITE)
            .map(|s| format!("{s}_hidden"))
            .collect(),
        Suite::Engineering => ENGINEERING_SUITE.iter().map(|s| s.to_string()).collect(),
    };
    names
        .iter()
        .map(|n| lookup_problem(n, None).expect("suite members are registered"))
        .collect()
}

/// Parses a plain-text problem descriptor.
///
/// The first meaningful line names a registered problem, the second gives the
/// dimension, and each following line holds `lower upper` for one coordinate.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_descriptor(text: &str) -> Result<ProblemSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line, message: &str| Error::Descriptor {
        line,
        message: message.into(),
    };
    let (_, name) = lines.next().ok_or_else(|| err(0, "missing problem name"))?;
    let (nline, ntext) = lines.next().ok_or_else(|| err(0, "missing dimension"))?;
    let n: usize = ntext
        .parse()
        .map_err(|_| err(nline, "dimension must be a positive integer"))?;
    let base = lookup_problem(name, Some(n))?;
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for (line, text) in lines {
        let mut parts = text.split_whitespace();
        let lo = parts.next().and_then(|s| s.parse::<f64>().ok());
        let hi = parts.next().and_then(|s| s.parse::<f64>().ok());
        match (lo, hi, parts.next()) {
            (Some(lo), Some(hi), None) => {
                lower.push(lo);
                upper.push(hi);
            }
            _ => return Err(err(line, "expected `lower upper`")),
        }
    }
    if lower.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: lower.len(),
        });
    }
    rebound(&base, lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{evaluate_constraints, evaluate_objective, ProblemClass};

    #[test]
    fn rosenbrock_instances() {
        for n in [2, 3, 5, 10] {
            let p = lookup_problem("rosenbrock", Some(n)).unwrap();
            assert_eq!(p.dim(), n);
            assert!(p.lower.iter().all(|&v| v == -5.0));
            assert!(p.upper.iter().all(|&v| v == 10.0));
            assert_eq!(p.class(), ProblemClass::Box);
        }
        assert!(matches!(
            lookup_problem("rosenbrock", Some(4)),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(matches!(
            lookup_problem("no_such_problem", None),
            Err(Error::UnknownProblem { .. })
        ));
        assert!(lookup_problem("branin_hidden", None).is_err());
    }

    #[test]
    fn every_registered_problem_is_consistent_at_its_optimum() {
        for name in problem_names() {
            let p = lookup_problem(&name, None).unwrap();
            let Some(k) = p.known.clone() else { continue };
            let Some(x) = k.x else { continue };
            // Rounded reference points may sit a hair outside an active constraint.
            if p.class() == ProblemClass::Hidden {
                continue;
            }
            let f = evaluate_objective(&p, &x).unwrap();
            let tol = 1e-5 * k.f.abs().max(1e-3);
            assert!((f - k.f).abs() <= tol, "{name}: f(x*) = {f} vs {}", k.f);
            let g = evaluate_constraints(&p, &x).unwrap();
            for (i, v) in g.inequalities.iter().enumerate() {
                assert!(*v <= 1e-3, "{name}: g{i} = {v}");
            }
        }
    }

    #[test]
    fn box_problems_report_no_constraints() {
        let p = lookup_problem("branin", None).unwrap();
        let g = evaluate_constraints(&p, &[0.0, 1.0]).unwrap();
        assert!(g.inequalities.is_empty() && g.equalities.is_empty());
    }

    #[test]
    fn suites_have_expected_sizes() {
        let b = suite(Suite::Box);
        assert_eq!(b.len(), 10);
        assert!(b
            .iter()
            .all(|p| p.dim() <= 4 && p.class() == ProblemClass::Box));
        assert!(suite(Suite::Linear)
            .iter()
            .all(|p| p.class() == ProblemClass::Linear));
        assert!(suite(Suite::Hidden)
            .iter()
            .all(|p| p.class() == ProblemClass::Hidden));
        assert_eq!(suite(Suite::Engineering).len(), 11);
    }

    #[test]
    fn descriptor_rebounds_a_registered_objective() {
        let text = "# custom\nrosenbrock\n3\n-2 2\n-2 2\n-2 2\n";
        let p = parse_descriptor(text).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.upper, alloc::vec![2.0; 3]);
        assert!(p.known.is_some());
        let moved = parse_descriptor("rosenbrock\n2\n2 3\n2 3\n").unwrap();
        assert!(moved.known.is_none());
        assert!(matches!(
            parse_descriptor("rosenbrock\n2\n0 1\n"),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            parse_descriptor("rosenbrock\nx\n"),
            Err(Error::Descriptor { line: 2, .. })
        ));
    }
}

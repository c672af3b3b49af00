//! Optimization problem descriptions, evaluation and constraint transforms.
//!
//! A [`ProblemSpec`] is a box-bounded objective with optional inequality
//! constraints `g(x) <= 0`, equality constraints `h(x) = 0`, or a hidden
//! feasibility oracle whose constraint values are never exposed.

mod classic;
mod engineering;
mod registry;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub use engineering::regression_problem;
pub use registry::{lookup_problem, parse_descriptor, problem_names, suite, Suite};

/// Scalar function of a point in original coordinates.
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Hidden feasibility oracle: `true` when the point is feasible.
pub type FeasibilityFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Wraps a closure as a [`ScalarFn`].
pub fn scalar<F>(f: F) -> ScalarFn
where
    F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

/// A single constraint function.
#[derive(Clone)]
pub enum Constraint {
    /// `coeffs . x + offset`
    Affine { coeffs: Vec<f64>, offset: f64 },
    /// Arbitrary nonlinear function.
    General(ScalarFn),
}

impl Constraint {
    /// Affine constraint `coeffs . x + offset`.
    pub fn affine(coeffs: Vec<f64>, offset: f64) -> Self {
        Constraint::Affine { coeffs, offset }
    }

    /// General constraint from a closure.
    pub fn general<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Constraint::General(Arc::new(f))
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Constraint::Affine { coeffs, offset } => {
                coeffs.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + offset
            }
            Constraint::General(f) => f(x),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Constraint::Affine { .. })
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Affine { coeffs, offset } => f
                .debug_struct("Affine")
                .field("coeffs", coeffs)
                .field("offset", offset)
                .finish(),
            Constraint::General(_) => f.write_str("General(..)"),
        }
    }
}

/// Problem class used for algorithm compatibility checks and report splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProblemClass {
    /// Only bound constraints.
    Box,
    /// Bound constraints plus affine inequalities.
    Linear,
    /// At least one nonlinear (or equality) constraint.
    Nonlinear,
    /// Feasibility known only through an oracle.
    Hidden,
}

impl ProblemClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemClass::Box => "box",
            ProblemClass::Linear => "linear",
            ProblemClass::Nonlinear => "nonlinear",
            ProblemClass::Hidden => "hidden",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "box" => Some(ProblemClass::Box),
            "linear" => Some(ProblemClass::Linear),
            "nonlinear" | "general" => Some(ProblemClass::Nonlinear),
            "hidden" => Some(ProblemClass::Hidden),
            _ => None,
        }
    }
}

impl fmt::Display for ProblemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Best known solution of a registered problem.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownOptimum {
    pub f: f64,
    pub x: Option<Vec<f64>>,
    /// Indices of inequality constraints active at `x`.
    pub active: Vec<usize>,
}

/// A bounded optimization problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub objective: ScalarFn,
    /// Constraints of the form `g(x) <= 0`.
    pub inequalities: Vec<Constraint>,
    /// Constraints of the form `h(x) = 0`.
    pub equalities: Vec<Constraint>,
    pub hidden: Option<FeasibilityFn>,
    pub known: Option<KnownOptimum>,
    /// Objective and feasible set are invariant under coordinate permutation.
    pub symmetric: bool,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("inequalities", &self.inequalities.len())
            .field("equalities", &self.equalities.len())
            .field("hidden", &self.hidden.is_some())
            .field("known", &self.known)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl ProblemSpec {
    /// Box-constrained problem. Bounds must be finite with `lower < upper`.
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        objective: ScalarFn,
    ) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidArgument(
                "problem dimension must be at least 1".into(),
            ));
        }
        for (index, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidBounds {
                    index,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(ProblemSpec {
            name: name.into(),
            lower,
            upper,
            objective,
            inequalities: Vec::new(),
            equalities: Vec::new(),
            hidden: None,
            known: None,
            symmetric: false,
        })
    }

    pub fn with_inequality(mut self, g: Constraint) -> Self {
        self.inequalities.push(g);
        self
    }

    pub fn with_equality(mut self, h: Constraint) -> Self {
        self.equalities.push(h);
        self
    }

    pub fn with_known(mut self, f: f64, x: Option<Vec<f64>>) -> Self {
        self.known = Some(KnownOptimum {
            f,
            x,
            active: Vec::new(),
        });
        self
    }

    pub fn with_active(mut self, active: Vec<usize>) -> Self {
        if let Some(k) = self.known.as_mut() {
            k.active = active;
        }
        self
    }

    pub fn with_symmetry(mut self) -> Self {
        self.symmetric = true;
        self
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn fstar(&self) -> Option<f64> {
        self.known.as_ref().map(|k| k.f)
    }

    pub fn class(&self) -> ProblemClass {
        if self.hidden.is_some() {
            ProblemClass::Hidden
        } else if self.inequalities.is_empty() && self.equalities.is_empty() {
            ProblemClass::Box
        } else if self.equalities.is_empty() && self.inequalities.iter().all(Constraint::is_affine)
        {
            ProblemClass::Linear
        } else {
            ProblemClass::Nonlinear
        }
    }

    pub fn is_constrained(&self) -> bool {
        !self.inequalities.is_empty() || !self.equalities.is_empty()
    }

    /// Checks length and bounds, allowing a relative slack of `1e-9` of the box width.
    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (index, ((&v, &lo), &hi)) in x.iter().zip(&self.lower).zip(&self.upper).enumerate() {
            let slack = 1e-9 * (hi - lo);
            if !(v >= lo - slack && v <= hi + slack) {
                return Err(Error::OutOfBounds {
                    index,
                    value: v,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(())
    }

    /// Objective without bound checks. Non-finite results and hidden
    /// infeasibility both map to `f64::INFINITY`.
    pub fn objective_unchecked(&self, x: &[f64]) -> f64 {
        if let Some(oracle) = &self.hidden {
            if !oracle(x) {
                return f64::INFINITY;
            }
        }
        let v = (self.objective)(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }

    /// Total violation `sum max(g, 0) + sum |h|`; non-finite constraint values count as infinite.
    pub fn violation_unchecked(&self, x: &[f64]) -> f64 {
        let mut phi = 0.0;
        for g in &self.inequalities {
            let v = g.value(x);
            if v.is_nan() {
                return f64::INFINITY;
            }
            if v > 0.0 {
                phi += v;
            }
        }
        for h in &self.equalities {
            let v = h.value(x);
            if v.is_nan() {
                return f64::INFINITY;
            }
            phi += libm::fabs(v);
        }
        phi
    }
}

/// Constraint values at one point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConstraintValues {
    pub inequalities: Vec<f64>,
    pub equalities: Vec<f64>,
}

/// Objective value at `x`, or `f64::INFINITY` when the point is infeasible
/// for a hidden-constraint problem or the objective is not finite.
pub fn evaluate_objective(spec: &ProblemSpec, x: &[f64]) -> Result<f64> {
    spec.check_point(x)?;
    Ok(spec.objective_unchecked(x))
}

/// All explicit constraint values at `x`. Box and hidden problems return empty lists.
pub fn evaluate_constraints(spec: &ProblemSpec, x: &[f64]) -> Result<ConstraintValues> {
    spec.check_point(x)?;
    Ok(ConstraintValues {
        inequalities: spec.inequalities.iter().map(|g| g.value(x)).collect(),
        equalities: spec.equalities.iter().map(|h| h.value(x)).collect(),
    })
}

/// Default tolerance for relaxing equality constraints.
pub const EPS_H: f64 = 1e-8;

/// Replaces each equality `h = 0` by the inequality `|h| - eps_h <= 0`.
pub fn transform_equalities(spec: &ProblemSpec, eps_h: f64) -> ProblemSpec {
    let mut out = spec.clone();
    let equalities = core::mem::take(&mut out.equalities);
    for h in equalities {
        out.inequalities
            .push(Constraint::General(Arc::new(move |x: &[f64]| {
                libm::fabs(h.value(x)) - eps_h
            })));
    }
    out
}

/// Hides the explicit constraints of `spec` behind a feasibility oracle.
///
/// A point is feasible when every `g <= 0` and every `|h| <= eps_h`.
pub fn hidden_feasibility(spec: &ProblemSpec, eps_h: f64) -> ProblemSpec {
    let mut out = spec.clone();
    let g = core::mem::take(&mut out.inequalities);
    let h = core::mem::take(&mut out.equalities);
    let previous = out.hidden.take();
    out.hidden = Some(Arc::new(move |x: &[f64]| {
        previous.as_ref().is_none_or(|p| p(x))
            && g.iter().all(|c| c.value(x) <= 0.0)
            && h.iter().all(|c| libm::fabs(c.value(x)) <= eps_h)
    }));
    out.name = format!("{}_hidden", spec.name);
    out
}

/// Re-bounds `spec`, dropping the known optimum when it falls outside the new box.
pub fn rebound(spec: &ProblemSpec, lower: Vec<f64>, upper: Vec<f64>) -> Result<ProblemSpec> {
    let mut fresh = ProblemSpec::new(spec.name.clone(), lower, upper, spec.objective.clone())?;
    if fresh.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: fresh.dim(),
        });
    }
    fresh.inequalities = spec.inequalities.clone();
    fresh.equalities = spec.equalities.clone();
    fresh.hidden = spec.hidden.clone();
    fresh.symmetric = spec.symmetric
        && fresh.lower.windows(2).all(|w| w[0] == w[1])
        && fresh.upper.windows(2).all(|w| w[0] == w[1]);
    fresh.known = spec
        .known
        .clone()
        .filter(|k| k.x.as_ref().is_some_and(|x| fresh.check_point(x).is_ok()));
    Ok(fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn quad() -> ProblemSpec {
        ProblemSpec::new(
            "quad",
            vec![-1.0, -1.0],
            vec![1.0, 1.0],
            scalar(|x| x[0] * x[0] + x[1]),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_bounds() {
        let r = ProblemSpec::new("b", vec![1.0], vec![1.0], scalar(|_| 0.0));
        assert!(matches!(r, Err(Error::InvalidBounds { .. })));
        let r = ProblemSpec::new("b", vec![0.0, f64::NAN], vec![1.0, 1.0], scalar(|_| 0.0));
        assert!(matches!(r, Err(Error::InvalidBounds { index: 1, .. })));
    }

    #[test]
    fn out_of_bounds_is_an_error() {
        let p = quad();
        assert!(matches!(
            evaluate_objective(&p, &[2.0, 0.0]),
            Err(Error::OutOfBounds { index: 0, .. })
        ));
        assert!(evaluate_objective(&p, &[1.0, -1.0]).is_ok());
    }

    #[test]
    fn class_detection() {
        let p = quad();
        assert_eq!(p.class(), ProblemClass::Box);
        let lin = p
            .clone()
            .with_inequality(Constraint::affine(vec![1.0, 1.0], -1.0));
        assert_eq!(lin.class(), ProblemClass::Linear);
        let nl = lin
            .clone()
            .with_inequality(Constraint::general(|x| x[0] * x[1]));
        assert_eq!(nl.class(), ProblemClass::Nonlinear);
        assert_eq!(hidden_feasibility(&nl, 1e-8).class(), ProblemClass::Hidden);
    }

    #[test]
    fn equality_transform() {
        let p = quad().with_equality(Constraint::general(|x| x[0] - 0.5));
        let t = transform_equalities(&p, 1e-8);
        assert!(t.equalities.is_empty());
        let g = evaluate_constraints(&t, &[0.5 + 1e-9, 0.0]).unwrap();
        assert!(g.inequalities[0] <= 0.0);
        let g = evaluate_constraints(&t, &[0.25, 0.0]).unwrap();
        assert!((g.inequalities[0] - (0.25 - 1e-8)).abs() < 1e-15);
    }

    #[test]
    fn hidden_marks_infeasible_points() {
        let p = quad().with_inequality(Constraint::affine(vec![1.0, 0.0], 0.0));
        let h = hidden_feasibility(&p, 1e-8);
        assert_eq!(evaluate_objective(&h, &[0.5, 0.0]).unwrap(), f64::INFINITY);
        assert_eq!(evaluate_objective(&h, &[-0.5, 0.0]).unwrap(), 0.25);
        assert!(evaluate_constraints(&h, &[0.5, 0.0])
            .unwrap()
            .inequalities
            .is_empty());
    }

    #[test]
    fn violation_sums_positive_parts() {
        let p = quad()
            .with_inequality(Constraint::affine(vec![1.0, 0.0], 0.0))
            .with_inequality(Constraint::affine(vec![0.0, 1.0], 0.0))
            .with_equality(Constraint::affine(vec![1.0, 1.0], 0.0));
        assert!((p.violation_unchecked(&[0.5, -0.25]) - (0.5 + 0.25)).abs() < 1e-15);
    }
}

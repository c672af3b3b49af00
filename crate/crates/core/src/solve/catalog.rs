//! The algorithm catalog: every id mapped to a combination of partitioning,
//! selection, constraint handling and hybridization.

use crate::constraints::{GlceMode, HiddenHandler};
use crate::error::{Error, Result};
use crate::partition::{DiagonalSampling, MeasureKind, SimplexSampling, TrisectRule};
use crate::problem::ProblemClass;
use crate::selection::{ExtremeMode, GlMode, PerGroup, Scaling, SymRule, DEFAULT_EPSILON};

/// Every catalog id, in catalog order.
pub const ALGORITHMS: [&str; 36] = [
    "DIRECT",
    "DIRECT-restart",
    "DIRECT-m",
    "DIRECT-l",
    "DIRECT-rev",
    "DIRECT-a",
    "DIRMIN",
    "PLOR",
    "glbSolve",
    "glbSolve-sym",
    "glbSolve-sym2",
    "MrDIRECT",
    "MrDIRECT075",
    "BIRECT",
    "GB-DISIMPL-C",
    "GB-DISIMPL-V",
    "Gb-BIRECT",
    "BIRMIN",
    "Gb-glbSolve",
    "DISIMPL-C",
    "DISIMPL-V",
    "ADC",
    "Aggressive DIRECT",
    "DIRECT-G",
    "DIRECT-L",
    "DIRECT-GL",
    "Lc-DISIMPL-C",
    "Lc-DISIMPL-V",
    "DIRECT-L1",
    "DIRECT-GLc",
    "DIRECT-GLce",
    "DIRECT-GLce-min",
    "DIRECT-NAS",
    "DIRECT-Barrier",
    "subDIRECT-Barrier",
    "DIRECT-GLh",
];

/// Alternative spellings accepted by [`strategy`].
const ALIASES: [(&str, &str); 2] = [("DIRECT v4.0", "DIRECT"), ("MrDIRECT_075", "MrDIRECT075")];

/// Per-level epsilons of the tuned multilevel variant (index = level).
pub const MRDIRECT075_EPSILONS: [f64; 3] = [0.0, 1e-7, 1e-5];

/// Which problem classes an algorithm accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Box constraints only.
    Box,
    /// Box constraints plus affine inequalities.
    Linear,
    /// Any explicit constraints.
    General,
    /// Hidden constraints; explicit ones are hidden first.
    Hidden,
}

impl Family {
    pub fn accepts(self, class: ProblemClass) -> bool {
        use ProblemClass as C;
        match self {
            Family::Box => class == C::Box,
            Family::Linear => matches!(class, C::Box | C::Linear),
            Family::General => matches!(class, C::Box | C::Linear | C::Nonlinear),
            Family::Hidden => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partitioning {
    /// Center-sampled trisection.
    Trisect(TrisectRule),
    /// Diagonal-sampled bisection.
    Bisect(DiagonalSampling),
    /// Simplicial subdivision of the unit cube.
    Simplex(SimplexSampling),
    /// Simplicial subdivision of the linear feasible region.
    FeasibleSimplex(SimplexSampling),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selector {
    /// Lower-right convex hull with the epsilon test.
    Hull {
        scaling: Scaling,
        per_group: PerGroup,
    },
    /// Aggressive or PLOR group extremes.
    Extremes(ExtremeMode),
    /// Enlarged GL-type sets.
    Gl(GlMode),
    /// Hull selection on a W-cycle of filtered views, one epsilon per level.
    MultiLevel([f64; 3]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Handler {
    /// Raw objective; failed evaluations rank just above the worst value.
    Plain,
    /// Exact penalty with a uniform weight.
    L1,
    /// Two-phase violation and objective handler.
    Glce(GlceMode),
    Hidden(HiddenHandler),
}

/// When the local minimizer runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hybrid {
    None,
    /// From the incumbent whenever it improves.
    OnImprovement,
    /// From every selected element.
    EveryPoh,
}

/// One catalog entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Strategy {
    pub id: &'static str,
    pub family: Family,
    pub partitioning: Partitioning,
    pub measure: MeasureKind,
    pub selector: Selector,
    /// Default epsilon of the hull test.
    pub epsilon: f64,
    /// Epsilon drops to zero and rises after stagnation.
    pub restart: bool,
    pub globally_biased: bool,
    pub symmetry: Option<SymRule>,
    pub handler: Handler,
    pub hybrid: Hybrid,
}

const BASE: Strategy = Strategy {
    id: "DIRECT",
    family: Family::Box,
    partitioning: Partitioning::Trisect(TrisectRule::AllLongest),
    measure: MeasureKind::Euclidean,
    selector: Selector::Hull {
        scaling: Scaling::None,
        per_group: PerGroup::AllTies,
    },
    epsilon: DEFAULT_EPSILON,
    restart: false,
    globally_biased: false,
    symmetry: None,
    handler: Handler::Plain,
    hybrid: Hybrid::None,
};

const ONE_PER_GROUP: Selector = Selector::Hull {
    scaling: Scaling::None,
    per_group: PerGroup::OnePerGroup,
};

const fn hull(scaling: Scaling) -> Selector {
    Selector::Hull {
        scaling,
        per_group: PerGroup::AllTies,
    }
}

const fn with_id(id: &'static str) -> Strategy {
    Strategy { id, ..BASE }
}

/// Looks up a catalog entry by its case-sensitive id.
pub fn strategy(id: &str) -> Result<Strategy> {
    let id = ALIASES
        .iter()
        .find(|(a, _)| *a == id)
        .map_or(id, |(_, canonical)| canonical);
    let name = ALGORITHMS
        .iter()
        .find(|a| **a == id)
        .copied()
        .ok_or_else(|| Error::UnknownAlgorithm(id.into()))?;
    let s = with_id(name);
    let birect = Partitioning::Bisect(DiagonalSampling::Thirds);
    let gl = Strategy {
        selector: Selector::Gl(GlMode::Both),
        ..s
    };
    Ok(match name {
        "DIRECT" | "glbSolve" => s,
        "DIRECT-restart" => Strategy { restart: true, ..s },
        "DIRECT-m" => Strategy {
            selector: hull(Scaling::Median),
            ..s
        },
        "DIRECT-a" => Strategy {
            selector: hull(Scaling::Average),
            ..s
        },
        "DIRECT-l" => Strategy {
            measure: MeasureKind::LongestSide,
            selector: ONE_PER_GROUP,
            ..s
        },
        "DIRECT-rev" => Strategy {
            partitioning: Partitioning::Trisect(TrisectRule::OneLongest),
            selector: ONE_PER_GROUP,
            hybrid: Hybrid::OnImprovement,
            ..s
        },
        "DIRMIN" => Strategy {
            hybrid: Hybrid::EveryPoh,
            ..s
        },
        "PLOR" => Strategy {
            selector: Selector::Extremes(ExtremeMode::Plor),
            ..s
        },
        "glbSolve-sym" => Strategy {
            symmetry: Some(SymRule::Strict),
            ..s
        },
        "glbSolve-sym2" => Strategy {
            symmetry: Some(SymRule::Weak),
            ..s
        },
        "MrDIRECT" => Strategy {
            selector: Selector::MultiLevel([DEFAULT_EPSILON; 3]),
            ..s
        },
        "MrDIRECT075" => Strategy {
            selector: Selector::MultiLevel(MRDIRECT075_EPSILONS),
            ..s
        },
        "BIRECT" => Strategy {
            partitioning: birect,
            ..s
        },
        "Gb-BIRECT" => Strategy {
            partitioning: birect,
            globally_biased: true,
            ..s
        },
        "BIRMIN" => Strategy {
            partitioning: birect,
            globally_biased: true,
            hybrid: Hybrid::OnImprovement,
            ..s
        },
        "Gb-glbSolve" => Strategy {
            globally_biased: true,
            ..s
        },
        "ADC" => Strategy {
            partitioning: Partitioning::Bisect(DiagonalSampling::Vertices),
            globally_biased: true,
            ..s
        },
        "DISIMPL-C" | "DISIMPL-V" | "GB-DISIMPL-C" | "GB-DISIMPL-V" => Strategy {
            partitioning: Partitioning::Simplex(if name.ends_with('C') {
                SimplexSampling::Center
            } else {
                SimplexSampling::Vertices
            }),
            globally_biased: name.starts_with("GB"),
            ..s
        },
        "Lc-DISIMPL-C" | "Lc-DISIMPL-V" => Strategy {
            family: Family::Linear,
            partitioning: Partitioning::FeasibleSimplex(if name.ends_with('C') {
                SimplexSampling::Center
            } else {
                SimplexSampling::Vertices
            }),
            ..s
        },
        "Aggressive DIRECT" => Strategy {
            selector: Selector::Extremes(ExtremeMode::Aggressive),
            ..s
        },
        "DIRECT-G" => Strategy {
            selector: Selector::Gl(GlMode::Global),
            ..s
        },
        "DIRECT-L" => Strategy {
            selector: Selector::Gl(GlMode::Local),
            ..s
        },
        "DIRECT-GL" => gl,
        "DIRECT-L1" => Strategy {
            family: Family::General,
            handler: Handler::L1,
            ..s
        },
        "DIRECT-GLc" | "DIRECT-GLce" | "DIRECT-GLce-min" => Strategy {
            family: Family::General,
            handler: Handler::Glce(if name == "DIRECT-GLc" {
                GlceMode::Glc
            } else {
                GlceMode::Glce
            }),
            hybrid: if name == "DIRECT-GLce-min" {
                Hybrid::OnImprovement
            } else {
                Hybrid::None
            },
            ..gl
        },
        "DIRECT-NAS" => Strategy {
            family: Family::Hidden,
            handler: Handler::Hidden(HiddenHandler::Nas),
            ..s
        },
        "DIRECT-Barrier" => Strategy {
            family: Family::Hidden,
            handler: Handler::Hidden(HiddenHandler::Barrier),
            ..s
        },
        "subDIRECT-Barrier" => Strategy {
            family: Family::Hidden,
            handler: Handler::Hidden(HiddenHandler::SubBarrier),
            ..s
        },
        "DIRECT-GLh" => Strategy {
            family: Family::Hidden,
            handler: Handler::Hidden(HiddenHandler::Glh),
            ..gl
        },
        _ => unreachable!("every catalog id has an entry"),
    })
}

/// Whether the strategy's selector depends on an epsilon.
pub fn uses_epsilon(s: &Strategy) -> bool {
    matches!(s.selector, Selector::Hull { .. } | Selector::MultiLevel(_))
}

//! Exact Hensel lifting of polynomial factorizations over the p-adic
//! integers, driven by the n-ary resultant matrix of the factors.
//!
//! ```
//! use henselift::{new_system, lift_to_precision, LiftOptions, ModeRequest, MonicPoly, PadicContext};
//!
//! let ctx = PadicContext::new(2)?;
//! let f = MonicPoly::from_lower([8, -2, 1]);
//! let start = vec![MonicPoly::from_lower([0]), MonicPoly::from_lower([2]), MonicPoly::from_lower([7])];
//! let sys = new_system(&ctx, f, start, 3, ModeRequest::Auto)?;
//! let (factors, _, report) = lift_to_precision(&sys, 64, 20, &LiftOptions::default())?;
//! assert_eq!(report.steps[1].s, 4);
//! assert_eq!(factors.len(), 3);
//! # Ok::<(), henselift::Error>(())
//! ```

pub mod check;
pub mod error;
pub mod lift;
pub mod linalg;
pub mod locsmith;
pub mod poly;
pub mod problem;
pub mod resmat;
pub mod ring;

pub use error::{Error, Result};
pub use lift::{
    check_uniqueness_bound, compare_strategies, lift_step, lift_step_with, lift_steps,
    lift_to_precision, new_system, FactorSystem, LiftOptions, LiftReport, LiftStep, Mode,
    ModeRequest, Reduction, StepRecord, StrategyComparison,
};
pub use linalg::Matrix;
pub use locsmith::{smith_p, solve_row, PivotRule, SmithDecomposition};
pub use poly::{discriminant, omit_product, product, sylvester_resultant, MonicPoly};
pub use problem::ProblemSpec;
pub use resmat::{build_matrix, profile, resultant, ResultantMatrix, ResultantProfile};
pub use ring::{PadicContext, Residue, Valuation};

pub mod brace;
pub mod check;
pub mod error;
pub mod fixture;
pub mod jet;
pub mod json;
pub mod kernel;
pub mod laurent;
pub mod lie;
pub mod matrix;
pub mod nilpotent;
pub mod novikov;
pub mod ode;
pub mod pair;
pub mod poly;
pub mod post;
pub mod rota_baxter;
pub mod sample;
pub mod scalar;
pub mod suite;

pub use check::{CheckResult, NamedMatrix, Status};
pub use error::{Error, Result};
pub use fixture::{list_fixtures, CatalogueEntry, GroupFixture, GroupOperator, LieFixture};
pub use matrix::{EpsMatrix, ExactMatrix, Matrix};
pub use pair::{GroupAction, MapPair};
pub use sample::Mode;
pub use scalar::Rational;
pub use suite::{ode_residual_rows, run_suite, Report, SuiteConfig, SUITES};

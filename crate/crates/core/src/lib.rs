//! Covering certificates for discs: a rotation-invariant singular measure
//! under which every regular angular domain measures its own angle, exact
//! per-radius coverage checks for wedges and strips, and the plank bound
//! for the unit disc.
//!
//! The crate is organised bottom-up:
//!
//! * [`geom`]: points, the annulus, wedges, strips and circle arc sets.
//! * [`numerics`]: adaptive quadrature with endpoint singularity removal.
//! * [`measure`]: the density, its closed forms and quadrature oracles.
//! * [`coverage`]: coverage checks, regularization and strip decomposition.
//! * [`certify`]: end-to-end certificates.

pub mod certify;
pub mod coverage;
pub mod geom;
pub mod measure;
pub mod numerics;

pub use certify::{
    certify_angular, certify_plank, hatbox_zone_area, limit_derivation_check, AngularCertificate, CertifyError, LimitRow, LimitTable, PlankCertificate, Verdict,
    ZoneSpec,
};
pub use coverage::{check_coverage, check_disc_coverage, regularize, strip_to_regular_domains, CoverageError, CoverageReport, RegularizationResult, StripDecomposition};
pub use geom::{make_regular, view_angle, AngularDomain, AnnulusConfig, ArcIntervalSet, GeomError, PointXY, RegularDomain, RegularWedge, Strip};
pub use measure::{Measure, MeasureError, MeasureResult, Method, RadialProfile};
pub use numerics::{integrate, integrate_gaps, integrate_with, QuadratureOptions, IntegrationError, QuadratureResult, SingularityHint};

//! Certificates of positivity, complete (co)positivity, PPT, entanglement
//! breaking and separability for group-covariant maps and group-invariant
//! states: the hyperoctahedral channel family on `M_d`, tripartite Werner
//! states under `U⊗U⊗U`, and quantum orthogonal (`U⊗Ū⊗U`) invariant states.

pub mod certificate;
pub mod choi;
pub mod error;
pub mod format;
pub mod hh;
pub mod linalg;
pub mod oracle;
pub mod quo;
pub mod random;
pub mod region;
pub mod s3;
pub mod selftest;
pub mod twirl;
pub mod werner3;
pub mod witness;

pub use certificate::{Certificate, Check, Evidence, Verdict, WitnessRecord};
pub use choi::{ChoiScale, LinMapSpec, MapKind, Structured};
pub use error::{Error, Result};
pub use hh::HhCoeffs;
pub use linalg::{CMat, Dims, PsdCheck, Tolerances, C64};
pub use quo::{QuoCoeffs, QuoExtremal, QuoType};
pub use region::{Constraint, Halfspace, RegionCheck};
pub use s3::{Perm3, S3Coeffs, S3Vec, Sign};
pub use twirl::{InvBasis, Symmetry};
pub use werner3::{IsoBlock, W3Extremal, W3Type};

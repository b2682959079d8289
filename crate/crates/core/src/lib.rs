//! Topology, multiplicities and area bounds of the bipolar surfaces of the
//! Lawson surfaces `ξ_{m−1,k−1}` and `η_{m−1,k−1}`, computed from the
//! reflection groups of their boundary polygons.

pub mod bipolar;
pub mod complex;
pub mod exterior;
pub mod group;
pub mod lattice;
pub mod normal_form;
pub mod report;

use thiserror::Error;

pub use bipolar::{BipolarError, LawsonSurface};
pub use complex::{ComplexError, ComplexKind, SurfaceComplex};
pub use exterior::{Bivector6, ExteriorError, Plane2in6, PlaneRelation};
pub use group::{GroupError, MinusIdentityStatus, ReflectionGroup};
pub use lattice::{Family, LatticeConfig, LatticeError};
pub use normal_form::NormalFormError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Bipolar(#[from] BipolarError),
    #[error("(m, k) = (2, 2) is excluded; pass --allow-excluded to run it anyway")]
    ExcludedCase,
    #[error("invalid range '{0}' (expected A..B with 2 <= A <= B)")]
    InvalidRange(String),
    #[error("cross-checks failed: {0}")]
    CrossCheck(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 2 validation, 3 cross-check failure, 4 cap exceeded,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Lattice(_) | Error::Bipolar(BipolarError::Lattice(_)) => 2,
            Error::ExcludedCase | Error::InvalidRange(_) => 2,
            Error::CrossCheck(_) => 3,
            Error::Group(GroupError::CapExceeded { .. })
            | Error::Bipolar(BipolarError::Group(GroupError::CapExceeded { .. }))
            | Error::NormalForm(NormalFormError::Group(GroupError::CapExceeded { .. })) => 4,
            _ => 1,
        }
    }
}

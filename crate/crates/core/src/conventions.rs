//! Index conventions that the verifiers depend on.
//!
//! The defaults are the correct ones. The alternatives exist so the
//! verification suite can be run against deliberately broken conventions and
//! shown to fail.

use std::fmt;
use std::str::FromStr;

use crate::char_alg::Gf2Poly;
use crate::error::Error;

/// Layout of the Giambelli-Thom-Porteous matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GtpIndexing {
    /// Entry `(i, j)` is `w_(l+r+j-i)`.
    #[default]
    Standard,
    /// Entry `(i, j)` is `w_(l+r-j+i)`.
    Transposed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conventions {
    pub gtp_indexing: GtpIndexing,
    /// `w_0 = 1`; when false, `w_0` is taken to be zero.
    pub unit_w0: bool,
    /// Whether the closed-form Jacobian of the perturbed map carries its
    /// `t` column.
    pub jacobian_t_column: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            gtp_indexing: GtpIndexing::Standard,
            unit_w0: true,
            jacobian_t_column: true,
        }
    }
}

impl Conventions {
    pub fn w(&self, i: i64) -> Gf2Poly {
        self.w_of("", i)
    }

    pub fn w_of(&self, family: &str, i: i64) -> Gf2Poly {
        if i == 0 && !self.unit_w0 {
            Gf2Poly::zero()
        } else {
            Gf2Poly::w_of(family, i)
        }
    }

    pub fn with_fault(self, fault: Fault) -> Self {
        match fault {
            Fault::FlipGtp => Conventions {
                gtp_indexing: GtpIndexing::Transposed,
                ..self
            },
            Fault::DropW0 => Conventions {
                unit_w0: false,
                ..self
            },
            Fault::OmitTColumn => Conventions {
                jacobian_t_column: false,
                ..self
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    FlipGtp,
    DropW0,
    OmitTColumn,
}

impl Fault {
    pub const ALL: [Fault; 3] = [Fault::FlipGtp, Fault::DropW0, Fault::OmitTColumn];
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fault::FlipGtp => "flip-gtp",
            Fault::DropW0 => "drop-w0",
            Fault::OmitTColumn => "omit-t-column",
        })
    }
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Fault::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown fault {s:?}")))
    }
}

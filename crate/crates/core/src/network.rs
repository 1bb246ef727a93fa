//! Energy-independent description of a star network.
//!
//! A network is an ordered list of semi-infinite branches joined to a base
//! lead at one junction. Each branch is either clean or carries a single
//! rectangular barrier starting at a distance `offset` from the junction.

use crate::error::{Error, Result};

/// One rectangular barrier: strength `V`, width `w`, and the distance `lb`
/// between the junction and the barrier front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    /// Barrier strength `V`. Any finite real value; `V < E` (propagating) and
    /// `V < 0` (well) are allowed.
    pub strength: f64,
    /// Barrier width `w ≥ 0`.
    pub width: f64,
    /// Distance `lb ≥ 0` from the junction to the barrier front.
    pub offset: f64,
}

impl BarrierSpec {
    pub fn new(strength: f64, width: f64, offset: f64) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::Domain(format!(
                "barrier strength must be finite, got {strength}"
            )));
        }
        if !(width.is_finite() && width >= 0.0) {
            return Err(Error::Domain(format!(
                "barrier width must be finite and >= 0, got {width}"
            )));
        }
        if !(offset.is_finite() && offset >= 0.0) {
            return Err(Error::Domain(format!(
                "barrier offset must be finite and >= 0, got {offset}"
            )));
        }
        Ok(Self {
            strength,
            width,
            offset,
        })
    }
}

/// One side branch: a clean semi-infinite lead, optionally interrupted by a
/// single rectangular barrier.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BranchSpec {
    pub barrier: Option<BarrierSpec>,
}

impl BranchSpec {
    /// A branch with no barrier.
    pub fn free() -> Self {
        Self { barrier: None }
    }

    pub fn with_barrier(barrier: BarrierSpec) -> Self {
        Self {
            barrier: Some(barrier),
        }
    }
}

/// The star network: base lead plus `N ≥ 1` ordered side branches.
///
/// `N = 1` (a trivially transparent two-lead junction) is permitted; it is
/// the reduction case used to cross-check against the closed-form
/// single-barrier amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    branches: Vec<BranchSpec>,
}

impl NetworkSpec {
    pub fn new(branches: Vec<BranchSpec>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::Domain(
                "network needs at least one side branch".into(),
            ));
        }
        Ok(Self { branches })
    }

    /// `count` identical copies of `branch`.
    pub fn identical(branch: BranchSpec, count: usize) -> Result<Self> {
        Self::new(vec![branch; count])
    }

    pub fn branches(&self) -> &[BranchSpec] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branch(&self, index: usize) -> Result<&BranchSpec> {
        self.branches.get(index).ok_or_else(|| {
            Error::Domain(format!(
                "branch index {index} out of range (network has {} branches)",
                self.branches.len()
            ))
        })
    }

    /// Copy of this network with the barrier width of `branch` replaced.
    /// Errors if the branch has no barrier.
    pub fn with_branch_width(&self, index: usize, width: f64) -> Result<Self> {
        let mut branches = self.branches.clone();
        let slot = branches
            .get_mut(index)
            .ok_or_else(|| Error::Domain(format!("branch index {index} out of range")))?;
        match slot.barrier.as_mut() {
            Some(b) => {
                *b = BarrierSpec::new(b.strength, width, b.offset)?;
                Self::new(branches)
            }
            None => Err(Error::Domain(format!("branch {index} has no barrier"))),
        }
    }
}

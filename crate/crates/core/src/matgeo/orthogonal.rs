use super::mat::{Mat, MAX_DIM};
use super::svd::{svd, SvdResult};
use super::MatError;

/// Which part of `O(n)` a projection should land in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Any,
    Plus,
    Minus,
}

impl Component {
    fn sign(self) -> i8 {
        match self {
            Component::Any => 0,
            Component::Plus => 1,
            Component::Minus => -1,
        }
    }
}

/// Frobenius distances to both components, sharing one SVD.
#[derive(Clone, Copy, Debug)]
pub struct Rho {
    pub plus: f64,
    pub minus: f64,
    pub svd: SvdResult,
}

impl Rho {
    pub fn of(a: &Mat) -> Result<Rho, MatError> {
        let s = svd(a)?;
        Ok(Rho { plus: rho_from_svd(&s, 1), minus: rho_from_svd(&s, -1), svd: s })
    }

    /// `min(rho^+, rho^-)`.
    pub fn min(&self) -> f64 {
        self.plus.min(self.minus)
    }

    /// True when reaching the component of sign `s` needs the smallest
    /// singular direction flipped.
    pub fn flips(&self, s: i8) -> bool {
        self.svd.frame_sign != s
    }

    /// Nearest point of the component of sign `s`: `u diag(1,..,1,+-1) v^T`.
    pub fn projection(&self, s: i8) -> Mat {
        let n = self.svd.n();
        let mut j = [1.0; MAX_DIM];
        if self.flips(s) {
            j[n - 1] = -1.0;
        }
        self.svd.compose(&j[..n])
    }
}

fn rho_from_svd(s: &SvdResult, target: i8) -> f64 {
    let sig = s.sigma();
    let n = sig.len();
    let mut acc: f64 = sig[..n - 1].iter().map(|x| (x - 1.0) * (x - 1.0)).sum();
    let last = sig[n - 1];
    acc += if s.frame_sign == target { (last - 1.0).powi(2) } else { (last + 1.0).powi(2) };
    acc.sqrt()
}

/// `rho^s(A) = min over B in O(n)^s of ||A - B||`, `sign` is +1 or -1.
pub fn dist_to_component(a: &Mat, sign: i8) -> Result<f64, MatError> {
    assert!(sign == 1 || sign == -1, "component sign must be +1 or -1");
    let r = Rho::of(a)?;
    Ok(if sign > 0 { r.plus } else { r.minus })
}

pub fn dist_to_components(a: &Mat) -> Result<Rho, MatError> {
    Rho::of(a)
}

/// Nearest orthogonal matrix, optionally restricted to one component.
///
/// A constrained projection that must flip a vanishing singular direction is
/// not unique; that case is reported as [`MatError::DegenerateProjection`].
pub fn nearest_orthogonal(a: &Mat, component: Component) -> Result<Mat, MatError> {
    let r = Rho::of(a)?;
    let target = match component {
        Component::Any => r.svd.frame_sign,
        c => c.sign(),
    };
    if r.flips(target) && r.svd.det_sign != 0 && r.svd.smallest() <= 1e-12 {
        return Err(MatError::DegenerateProjection { sigma_min: r.svd.smallest() });
    }
    Ok(r.projection(target))
}

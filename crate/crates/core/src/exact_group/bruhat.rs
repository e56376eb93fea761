//! Coordinates on the three Bruhat cells that carry Kloosterman sums.
//!
//! Long cell:    g = u(x₁,a₁,b₁,c₁)·J·t·u(x₂,a₂,b₂,c₂)
//! s₁s₂s₁ cell:  g = u(x₁,a₁,b₁,c₁)·s₁s₂s₁·t·u(x₂,a₂,b₂,0)
//! s₂s₁s₂ cell:  g = u(x₁,a₁,b₁,c₁)·s₂s₁s₂·t·u(0,a₂,b₂,c₂)
//! with t = diag(t₁, t₂, t₃/t₁, t₃/t₂) and t₃ = μ(g). All coordinates are the
//! standard ones of u_matrix.

use num_traits::Zero;

use super::gsp::{torus, GSpElement};
use super::matrix::{det2, ExactMatrix4};
use super::unipotent::{u_matrix, UCoords};
use super::weyl::{WeylElem, WeylTag};
use super::{GroupError, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum CellTag {
    J,
    W121,
    W212,
}

impl CellTag {
    pub const ALL: [CellTag; 3] = [CellTag::J, CellTag::W121, CellTag::W212];

    pub fn weyl(self) -> WeylTag {
        match self {
            CellTag::J => WeylTag::J,
            CellTag::W121 => WeylTag::S1S2S1,
            CellTag::W212 => WeylTag::S2S1S2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellTag::J => "J",
            CellTag::W121 => "121",
            CellTag::W212 => "212",
        }
    }

    pub fn parse(s: &str) -> Option<CellTag> {
        match s {
            "J" | "j" | "long" => Some(CellTag::J),
            "121" | "s1s2s1" => Some(CellTag::W121),
            "212" | "s2s1s2" => Some(CellTag::W212),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellDecomp {
    pub cell: CellTag,
    pub u1: UCoords,
    pub t: (Q, Q, Q),
    pub u2: UCoords,
}

impl CellDecomp {
    pub fn reconstruct(&self) -> Result<GSpElement, GroupError> {
        let w = WeylElem::new(self.cell.weyl());
        let t = torus(&self.t.0, &self.t.1, &self.t.2)?;
        Ok(u_matrix(&self.u1).mul(&w.element).mul(&t).mul(&u_matrix(&self.u2)))
    }
}

/// Determinants of Δ₁ = [[a₁₁,a₁₂],[c₂₁,c₂₂]], Δ₂ = [[c₁₂,d₁₁],[c₂₂,d₂₁]], Δ₃ = [[a₁₂,b₁₁],[c₂₂,d₂₁]].
pub fn minors(g: &ExactMatrix4) -> (Q, Q, Q) {
    let d1 = det2(&[[g.at(1, 1).clone(), g.at(1, 2).clone()], [g.at(4, 1).clone(), g.at(4, 2).clone()]]);
    let d2 = det2(&[[g.at(3, 2).clone(), g.at(3, 3).clone()], [g.at(4, 2).clone(), g.at(4, 3).clone()]]);
    let d3 = det2(&[[g.at(1, 2).clone(), g.at(1, 3).clone()], [g.at(4, 2).clone(), g.at(4, 3).clone()]]);
    (d1, d2, d3)
}

pub fn c_block_det(g: &ExactMatrix4) -> Q {
    det2(&g.block(1, 0))
}

/// Which of the three cells g lies in, if any.
pub fn classify_cell(g: &ExactMatrix4) -> Option<CellTag> {
    let detc = c_block_det(g);
    let c22 = g.at(4, 2);
    let c21 = g.at(4, 1);
    let c12 = g.at(3, 2);
    if !detc.is_zero() && !c22.is_zero() {
        return Some(CellTag::J);
    }
    if detc.is_zero() && !c22.is_zero() {
        let (_, d2, _) = minors(g);
        if !d2.is_zero() {
            return Some(CellTag::W121);
        }
    }
    if c22.is_zero() && !c21.is_zero() && !c12.is_zero() {
        return Some(CellTag::W212);
    }
    None
}

pub fn bruhat_long_cell(g: &GSpElement) -> Result<CellDecomp, GroupError> {
    let m = g.matrix();
    let detc = c_block_det(m);
    let c22 = m.at(4, 2).clone();
    if detc.is_zero() || c22.is_zero() {
        return Err(GroupError::NotInCell("long Weyl cell needs det C ≠ 0 and c22 ≠ 0"));
    }
    let (dd1, dd2, _) = minors(m);
    let t2 = -c22.clone();
    let t1 = &detc / &t2;
    let t3 = g.mu().clone();
    let x1 = -m.at(3, 2) / &c22;
    let x2 = m.at(4, 1) / &c22;
    let c1 = &dd1 / &detc;
    let c2 = -&dd2 / &detc;
    let a1 = m.at(1, 2) / &c22;
    let a2 = m.at(4, 3) / &c22;
    let b1 = m.at(2, 2) / &c22;
    let b2 = m.at(4, 4) / &c22;
    // The left factor's (2,3) entry is a₁ + c₁x₁ in standard coordinates.
    let a1s = &a1 + &c1 * &x1;
    let out = CellDecomp {
        cell: CellTag::J,
        u1: UCoords::new(x1, a1s, b1, c1),
        t: (t1, t2, t3),
        u2: UCoords::new(x2, a2, b2, c2),
    };
    check_reconstruct(&out, m)?;
    Ok(out)
}

pub fn bruhat_121_cell(g: &GSpElement) -> Result<CellDecomp, GroupError> {
    let m = g.matrix();
    let detc = c_block_det(m);
    let c22 = m.at(4, 2).clone();
    let (_, dd2, dd3) = minors(m);
    if !detc.is_zero() || c22.is_zero() || dd2.is_zero() {
        return Err(GroupError::NotInCell("s1s2s1 cell needs det C = 0, c22 ≠ 0, det Δ2 ≠ 0"));
    }
    let t2 = -c22.clone();
    let t3 = g.mu().clone();
    let t1 = &t3 * &t2 / &dd2;
    let x1 = -m.at(3, 2) / &c22;
    let x2 = m.at(4, 1) / &c22;
    let a2 = m.at(4, 3) / &c22;
    let b2 = m.at(4, 4) / &c22;
    let b1 = m.at(2, 2) / &c22;
    let c1 = &dd3 / &dd2;
    let a1 = m.at(1, 2) / &c22 + &c1 * &x1;
    let out = CellDecomp {
        cell: CellTag::W121,
        u1: UCoords::new(x1, a1, b1, c1),
        t: (t1, t2, t3),
        u2: UCoords::new(x2, a2, b2, Q::zero()),
    };
    check_reconstruct(&out, m)?;
    Ok(out)
}

pub fn bruhat_212_cell(g: &GSpElement) -> Result<CellDecomp, GroupError> {
    let m = g.matrix();
    let c22 = m.at(4, 2);
    let c21 = m.at(4, 1).clone();
    let c12 = m.at(3, 2).clone();
    if !c22.is_zero() || c21.is_zero() || c12.is_zero() {
        return Err(GroupError::NotInCell("s2s1s2 cell needs c22 = 0, c21 ≠ 0, c12 ≠ 0"));
    }
    let t1 = -c21.clone();
    let t2 = -c12.clone();
    let t3 = g.mu().clone();
    let x1 = -m.at(3, 1) / &c21;
    let b1 = m.at(2, 1) / &c21;
    let a1 = m.at(2, 2) / &c12;
    let c1 = m.at(1, 2) / &c12;
    let c2 = m.at(4, 3) / &c21;
    let a2 = m.at(4, 4) / &c21;
    let b2 = (m.at(3, 4) - &a2 * m.at(3, 1)) / &c12;
    let out = CellDecomp {
        cell: CellTag::W212,
        u1: UCoords::new(x1, a1, b1, c1),
        t: (t1, t2, t3),
        u2: UCoords::new(Q::zero(), a2, b2, c2),
    };
    check_reconstruct(&out, m)?;
    Ok(out)
}

pub fn decompose(cell: CellTag, g: &GSpElement) -> Result<CellDecomp, GroupError> {
    match cell {
        CellTag::J => bruhat_long_cell(g),
        CellTag::W121 => bruhat_121_cell(g),
        CellTag::W212 => bruhat_212_cell(g),
    }
}

fn check_reconstruct(d: &CellDecomp, m: &ExactMatrix4) -> Result<(), GroupError> {
    if d.t.0.is_zero() || d.t.1.is_zero() || d.t.2.is_zero() {
        return Err(GroupError::NotInCell("degenerate torus part"));
    }
    // The extraction formulas only read part of g; a full reconstruction guards the rest.
    let r = d.reconstruct()?;
    if r.matrix() != m {
        return Err(GroupError::NotInCell("matrix is not in the cell"));
    }
    Ok(())
}

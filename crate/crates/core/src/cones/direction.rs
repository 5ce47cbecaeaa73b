use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, rat, sign_of, Rat};
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, TotallyRealField};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirectionSpace {
    /// Vectors on the power basis of F.
    Coordinates,
    /// Vectors (ρ₁(·),…,ρ_n(·)) in ℝ^n.
    Embeddings,
}

/// Q = base + δ·p₁ + δ²·p₂ + … for an infinitesimal δ > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrationalDirection {
    pub space: DirectionSpace,
    pub base: Vec<Rat>,
    pub perturbations: Vec<Vec<Rat>>,
}

fn unit_vec(n: usize, i: usize, s: i64) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = rat(s);
    v
}

impl IrrationalDirection {
    /// Coordinate-space direction; perturbed by the standard basis so every sign query is decided.
    pub fn coordinates(base: Vec<Rat>) -> Self {
        let n = base.len();
        let perturbations = (0..n).map(|i| unit_vec(n, i, 1)).collect();
        IrrationalDirection { space: DirectionSpace::Coordinates, base, perturbations }
    }

    pub fn with_perturbations(mut self, p: Vec<Vec<Rat>>) -> Self {
        self.perturbations = p;
        self
    }

    /// The j-th embedding axis, tilted by `tilt`·δ along each other axis.
    pub fn embedding_axis(n: usize, j: usize, tilt: i64) -> Self {
        let base = unit_vec(n, j, 1);
        let perturbations = (0..n).filter(|&k| k != j).map(|k| unit_vec(n, k, tilt)).collect();
        IrrationalDirection { space: DirectionSpace::Embeddings, base, perturbations }
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut v = || (0..n).map(|_| arith::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect::<Vec<_>>();
        let base = v();
        let mut perturbations: Vec<Vec<Rat>> = (0..n).map(|_| v()).collect();
        perturbations.extend((0..n).map(|i| unit_vec(n, i, 1)));
        IrrationalDirection { space: DirectionSpace::Coordinates, base, perturbations }
    }

    fn candidates(&self) -> impl Iterator<Item = &Vec<Rat>> {
        std::iter::once(&self.base).chain(self.perturbations.iter())
    }

    /// sgn det(ρ_i(x₁),…,ρ_i(Q),…,ρ_i(x_n)) with Q in slot `pos`.
    pub fn orientation_with(&self, field: &TotallyRealField, xs: &[&FieldElement], pos: usize) -> Result<i32> {
        let n = field.degree();
        if xs.len() != n || pos >= n {
            return Err(Error::invalid("orientation needs n vectors"));
        }
        for v in self.candidates() {
            let s = match self.space {
                DirectionSpace::Coordinates => {
                    let m: Vec<Vec<Rat>> = (0..n)
                        .map(|i| (0..n).map(|c| if c == pos { v[i].clone() } else { xs[c].0[i].clone() }).collect())
                        .collect();
                    sign_of(&arith::determinant(&m)) * field.omega_sign()
                }
                DirectionSpace::Embeddings => self.embedding_sign(field, xs, pos, v)?,
            };
            if s != 0 {
                return Ok(s);
            }
        }
        Err(Error::Internal("irrational direction lies in a rational hyperplane".into()))
    }

    fn embedding_sign(&self, field: &TotallyRealField, xs: &[&FieldElement], pos: usize, q: &[Rat]) -> Result<i32> {
        match field.degree() {
            1 => Ok(sign_of(&q[0])),
            2 => {
                let other = xs[1 - pos];
                // Q in column 0: q₀ρ₁(x) − q₁ρ₀(x); Q in column 1: ρ₀(x)q₁ − ρ₁(x)q₀
                let (a, b) = if pos == 0 { (q[0].clone(), -q[1].clone()) } else { (-q[0].clone(), q[1].clone()) };
                field.sign_of_embedding_combination(&[(a, other, 1), (b, other, 0)])
            }
            _ => Err(Error::unsupported("embedding-space directions beyond degree 2")),
        }
    }

    /// Direction for which the perturbation signs are reversed.
    pub fn negated_tilt(&self) -> Self {
        let mut q = self.clone();
        for p in &mut q.perturbations {
            for c in p.iter_mut() {
                *c = -c.clone();
            }
        }
        q
    }
}

//! Degree-one specialization: the closed-form `λ(D)` of a complementary
//! genus-`g` clover, its cross-check through the theta contraction, and the
//! Walker-normalization conversions.
//!
//! The two evaluation routes must agree exactly; their equality pins both
//! the global sign of the splitting engine and the `#Aut(θ) = 12`
//! normalization.

use crate::clover::{CloverData, Piece, TrilinearForm};
use crate::diagram::theta;
use crate::error::Error;
use crate::rat::{rat_int, Rational};
use crate::splitting::linking_number_diagram;

/// A degree-2 clover made of two complementary pieces of equal genus with
/// identity cross-linking in dual bases.
#[derive(Debug, Clone)]
pub struct ComplementaryClover {
    genus: usize,
    form_a: TrilinearForm,
    form_b: TrilinearForm,
}

impl ComplementaryClover {
    pub fn new(genus: usize, form_a: TrilinearForm, form_b: TrilinearForm) -> Result<Self, Error> {
        if form_a.dim() != genus || form_b.dim() != genus {
            return Err(Error::validation(format!(
                "form dimensions ({}, {}) do not match genus {genus}",
                form_a.dim(),
                form_b.dim()
            )));
        }
        Ok(ComplementaryClover {
            genus,
            form_a,
            form_b,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn form_a(&self) -> &TrilinearForm {
        &self.form_a
    }

    pub fn form_b(&self) -> &TrilinearForm {
        &self.form_b
    }
}

/// `λ(D) = −2 · Σ_{i<j<k} I_A(i,j,k) · I_B(i,j,k)`.
pub fn lambda_closed_form(cc: &ComplementaryClover) -> Rational {
    let mut sum = Rational::from_integer(0.into());
    for (&(i, j, k), a) in cc.form_a.entries() {
        let b = cc.form_b.eval(i, j, k);
        sum += a * &b;
    }
    sum * rat_int(-2)
}

/// `λ(D) = ℓ(D;θ)/6`, with the theta contraction evaluated on the clover
/// `(k = 2, I_1 = I_A, I_2 = I_B, L^{12} = identity)`.
pub fn lambda_via_theta(cc: &ComplementaryClover) -> Result<Rational, Error> {
    let g = cc.genus;
    let identity: Vec<Vec<Rational>> = (0..g)
        .map(|a| (0..g).map(|b| rat_int((a == b) as i64)).collect())
        .collect();
    let clover = CloverData::new(
        vec![
            Piece {
                genus: g,
                form: cc.form_a.clone(),
            },
            Piece {
                genus: g,
                form: cc.form_b.clone(),
            },
        ],
        vec![(0, 1, identity)],
    )?;
    let ell = linking_number_diagram(&clover, &theta())?;
    Ok(ell / rat_int(6))
}

/// Normalization conversions from the Walker invariant `λ_W`:
/// `λ = λ_W/2` and the theta coefficient of `Z_1` is `λ_W/4`.
pub fn walker_conversions(lambda_w: &Rational) -> (Rational, Rational) {
    (lambda_w / rat_int(2), lambda_w / rat_int(4))
}

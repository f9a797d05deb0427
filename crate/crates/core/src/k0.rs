//! The Fock space at `q = 1`: sparse integer combinations of multipartitions
//! with the Chevalley operators `e_i`, `f_i`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{FockError, Result};
use crate::multipartition::{Multicharge, Multipartition};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<Multipartition, i64>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn basis(lambda: Multipartition) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(lambda, 1);
        FockVector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, lambda: &Multipartition) -> i64 {
        self.terms.get(lambda).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multipartition, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn add_term(&mut self, lambda: Multipartition, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(lambda) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: i64) -> FockVector {
        if c == 0 {
            return FockVector::zero();
        }
        FockVector {
            terms: self.terms.iter().map(|(k, &v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Multipartition::size).max().unwrap_or(0)
    }
}

impl Add for &FockVector {
    type Output = FockVector;
    fn add(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (k, v) in rhs.terms() {
            out.add_term(k.clone(), v);
        }
        out
    }
}

impl Neg for &FockVector {
    type Output = FockVector;
    fn neg(self) -> FockVector {
        self.scale(-1)
    }
}

impl Sub for &FockVector {
    type Output = FockVector;
    fn sub(self, rhs: &FockVector) -> FockVector {
        self + &(-rhs)
    }
}

/// `f_i`: sum over ways of adding an i-box. Errors if a term would pass `cap`.
pub fn f_op(v: &FockVector, ctx: &Multicharge, i: i64, cap: usize) -> Result<FockVector> {
    let i = ctx.residue(i);
    let mut out = FockVector::zero();
    for (lambda, c) in v.terms() {
        for cell in lambda.addable().into_iter().filter(|b| b.residue(ctx) == i) {
            if lambda.size() + 1 > cap {
                return Err(FockError::DegreeCapExceeded {
                    cap,
                    reached: lambda.size() + 1,
                });
            }
            out.add_term(lambda.add_cell(&cell).expect("addable"), c);
        }
    }
    Ok(out)
}

/// `e_i`: sum over ways of removing an i-box.
pub fn e_op(v: &FockVector, ctx: &Multicharge, i: i64) -> FockVector {
    let i = ctx.residue(i);
    let mut out = FockVector::zero();
    for (lambda, c) in v.terms() {
        for cell in lambda.removable().into_iter().filter(|b| b.residue(ctx) == i) {
            out.add_term(lambda.remove_cell(&cell).expect("removable"), c);
        }
    }
    out
}

/// Eigenvalue of `h_i` on `|λ⟩`: #addable minus #removable i-boxes.
pub fn h_eigenvalue(lambda: &Multipartition, ctx: &Multicharge, i: i64) -> i64 {
    let i = ctx.residue(i);
    let add = lambda.addable().iter().filter(|b| b.residue(ctx) == i).count() as i64;
    let rem = lambda.removable().iter().filter(|b| b.residue(ctx) == i).count() as i64;
    add - rem
}

/// One nonzero entry `⟨row| op |col⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triplet {
    pub row: String,
    pub col: String,
    pub value: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    E,
    F,
}

/// Sparse matrix of `e_i` or `f_i` with columns indexed by `P_ℓ(degree)`.
pub fn operator_matrix(ctx: &Multicharge, op: Operator, i: i64, degree: usize) -> Vec<Triplet> {
    let mut out = Vec::new();
    for lambda in crate::multipartition::multipartitions_of(ctx.level(), degree) {
        let image = match op {
            Operator::F => f_op(&FockVector::basis(lambda.clone()), ctx, i, degree + 1).expect("within cap"),
            Operator::E => e_op(&FockVector::basis(lambda.clone()), ctx, i),
        };
        for (row, value) in image.terms() {
            out.push(Triplet {
                row: row.to_string(),
                col: lambda.to_string(),
                value,
            });
        }
    }
    out
}

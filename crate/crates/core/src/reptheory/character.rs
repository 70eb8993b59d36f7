use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactfield::CycNumber;
use crate::groups::FinGroup;

use super::rep::same_group;

/// A class function, one value per conjugacy class in the group's class order.
#[derive(Clone, Debug)]
pub struct Character {
    group: Arc<FinGroup>,
    values: Vec<CycNumber>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

impl Character {
    pub fn new(group: &Arc<FinGroup>, values: Vec<CycNumber>) -> Self {
        assert_eq!(values.len(), group.conjugacy_classes().len());
        Character { group: group.clone(), values }
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values
    }

    pub fn group(&self) -> &Arc<FinGroup> {
        &self.group
    }

    pub fn at(&self, g: usize) -> &CycNumber {
        &self.values[self.group.class_of(g)]
    }

    pub fn degree(&self) -> &CycNumber {
        self.at(self.group.identity())
    }

    fn zip(&self, other: &Self, f: impl Fn(&CycNumber, &CycNumber) -> CycNumber) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(Character { group: self.group.clone(), values })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn conj(&self) -> Self {
        Character { group: self.group.clone(), values: self.values.iter().map(CycNumber::conj).collect() }
    }

    pub fn pretty(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(CycNumber::pretty).collect();
        format!("({})", parts.join(", "))
    }
}

/// `(1/|G|) Σ_C |C| χ₁(C) conj(χ₂(C))`.
pub fn inner_product(a: &Character, b: &Character) -> Result<CycNumber> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let ctx = a.values.first().expect("at least one class").ctx().clone();
    let mut acc = CycNumber::zero(&ctx);
    for (c, (x, y)) in a.group.conjugacy_classes().iter().zip(a.values.iter().zip(&b.values)) {
        let t = x * &y.conj();
        acc += &t.scale(&BigRational::from_integer(BigInt::from(c.members.len())));
    }
    Ok(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(a.group.order()))))
}

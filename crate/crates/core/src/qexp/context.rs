use std::sync::{Arc, OnceLock};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::ideals::{points_in_box, totally_positive_generator, IdealHNF, IdealTable, NarrowClassData};
use crate::quad_field::{IntElement, QuadraticField};

/// One target coefficient of a product: the ideal `m = xi * t_lambda^{-1}`
/// and every split `xi = xi1 + (xi - xi1)` into totally positive elements of
/// `t_lambda`, recorded by the slots of the two resulting ideals.
#[derive(Clone, Debug)]
pub struct ConvolutionEntry {
    pub lambda: usize,
    pub xi: IntElement,
    pub terms: Vec<(u32, u32)>,
    /// `xi1` for each term, in the same order.
    pub points: Vec<IntElement>,
}

/// Shared data behind every series of one field, representative system and
/// maximal precision: the ideal table (norm `< bound`), narrow class data,
/// and the convolution table, built on first multiplication.
#[derive(Debug)]
pub struct SeriesContext {
    field: QuadraticField,
    classes: Arc<NarrowClassData>,
    table: IdealTable,
    convolution: OnceLock<Vec<ConvolutionEntry>>,
}

impl SeriesContext {
    pub fn new(field: &QuadraticField, bound: u64) -> Arc<Self> {
        Self::with_classes(Arc::new(NarrowClassData::new(field)), bound)
    }

    pub fn with_classes(classes: Arc<NarrowClassData>, bound: u64) -> Arc<Self> {
        let field = classes.field().clone();
        let table = IdealTable::new(&field, bound);
        Arc::new(SeriesContext { field, classes, table, convolution: OnceLock::new() })
    }

    pub fn field(&self) -> &QuadraticField {
        &self.field
    }

    pub fn classes(&self) -> &Arc<NarrowClassData> {
        &self.classes
    }

    pub fn h_plus(&self) -> usize {
        self.classes.h_plus()
    }

    pub fn table(&self) -> &IdealTable {
        &self.table
    }

    /// Largest precision supported.
    pub fn bound(&self) -> u64 {
        self.table.bound()
    }

    /// Number of ideal slots of norm `< b`.
    pub fn slots_below(&self, b: u64) -> usize {
        self.table.count_below(b)
    }

    pub fn slot_of(&self, ideal: &IdealHNF) -> Option<usize> {
        self.table.index_of(ideal)
    }

    /// Whether two contexts index series identically (same table and same
    /// representatives).
    pub fn compatible(&self, other: &SeriesContext) -> bool {
        std::ptr::eq(self, other)
            || (self.field == other.field && self.bound() == other.bound() && self.classes.representatives() == other.classes.representatives())
    }

    pub fn convolution(&self) -> &[ConvolutionEntry] {
        self.convolution.get_or_init(|| self.build_convolution())
    }

    fn build_convolution(&self) -> Vec<ConvolutionEntry> {
        let f = &self.field;
        let h = self.classes.h_plus();
        let inv_reps: Vec<IdealHNF> = self.classes.representatives().iter().map(|t| t.inverse(f)).collect();
        (0..self.table.len())
            .into_par_iter()
            .map(|i| {
                let m = self.table.ideal(i);
                // m t_lambda must be narrowly principal
                let (lambda, xi) = (0..h)
                    .find_map(|l| {
                        let prod = m.mul(f, self.classes.representative(l));
                        totally_positive_generator(f, self.classes.units(), &prod).map(|x| (l, x))
                    })
                    .expect("every ideal lies in some narrow class");
                let xi = xi.to_int_element().expect("generator of an integral ideal is integral");
                let t = self.classes.representative(lambda);
                let mut terms = Vec::new();
                let mut points = Vec::new();
                for xi1 in points_in_box(f, t, &xi) {
                    let rest = xi.clone() - xi1.clone();
                    let s1 = self.slot_for(&xi1, &inv_reps[lambda]);
                    let s2 = self.slot_for(&rest, &inv_reps[lambda]);
                    terms.push((s1, s2));
                    points.push(xi1);
                }
                ConvolutionEntry { lambda, xi, terms, points }
            })
            .collect()
    }

    fn slot_for(&self, x: &IntElement, t_inv: &IdealHNF) -> u32 {
        let id = IdealHNF::principal_int(&self.field, x).expect("nonzero").mul(&self.field, t_inv);
        self.table.index_of(&id).expect("box points have smaller norm").to_u32().unwrap()
    }
}

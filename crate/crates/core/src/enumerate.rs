//! Breadth-first enumeration of group elements with matrix deduplication.

use std::ops::RangeInclusive;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::element::{format_word, GroupElement, Word};
use crate::error::{Error, Result};
use crate::linalg::{self, FuzzyIndex};
use crate::scalar::Real;
use crate::system::GeometricSystem;

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Quantization grid of the matrix fingerprint (relative above 1).
    pub dedup_grid: f64,
    /// Entrywise tolerance, relative to the largest entry, under which two
    /// matrices are the same element.
    pub merge_tol: f64,
    /// Enumeration stops with an error once an entry exceeds this.
    pub max_entry: f64,
    /// Optional cap on the number of stored elements.
    pub max_elements: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            dedup_grid: 1e-7,
            merge_tol: 1e-9,
            max_entry: 1e12,
            max_elements: None,
        }
    }
}

/// All group elements up to a length, one ShortLex representative each,
/// stored level by level.
#[derive(Clone, Debug)]
pub struct ElementStore<T: Real> {
    elements: Vec<GroupElement<T>>,
    level_starts: Vec<usize>,
    index: FuzzyIndex,
    weights: Vec<f64>,
    merge_tol: f64,
}

enum Lookup {
    Found(usize),
    Missing,
    Ambiguous(usize, f64),
}

impl<T: Real> ElementStore<T> {
    fn with_identity(rank: usize, opts: &EnumerateOptions) -> Self {
        let mut store = Self {
            elements: Vec::new(),
            level_starts: vec![0],
            index: FuzzyIndex::new(opts.dedup_grid),
            weights: linalg::summary_weights(rank * rank),
            merge_tol: opts.merge_tol,
        };
        store.push(GroupElement::identity(rank));
        store
    }

    fn push(&mut self, elem: GroupElement<T>) {
        let key = linalg::summary(elem.matrix().iter().copied(), &self.weights);
        self.index.insert(key, self.elements.len());
        self.elements.push(elem);
    }

    fn lookup(&self, m: &DMatrix<T>, grid: f64) -> Lookup {
        let key = linalg::summary(m.iter().copied(), &self.weights);
        let mut ambiguous = None;
        for id in self.index.candidates(key) {
            let other = self.elements[id].matrix();
            let scale = linalg::max_abs(m).max(linalg::max_abs(other)).max(T::one()).as_f64();
            let diff = linalg::max_abs(&(m - other)).as_f64() / scale;
            if diff <= self.merge_tol {
                return Lookup::Found(id);
            }
            if diff <= grid {
                ambiguous = Some((id, diff));
            }
        }
        match ambiguous {
            Some((id, diff)) => Lookup::Ambiguous(id, diff),
            None => Lookup::Missing,
        }
    }

    /// Id of the stored element with this matrix, if any.
    pub fn find(&self, m: &DMatrix<T>) -> Option<usize> {
        match self.lookup(m, 0.0) {
            Lookup::Found(id) => Some(id),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Largest length covered by the store.
    pub fn max_length(&self) -> usize {
        self.level_starts.len() - 1
    }

    pub fn get(&self, id: usize) -> &GroupElement<T> {
        &self.elements[id]
    }

    /// Elements in ShortLex order.
    pub fn elements(&self) -> &[GroupElement<T>] {
        &self.elements
    }

    /// Elements of length exactly `k` (empty beyond the covered range).
    pub fn level(&self, k: usize) -> &[GroupElement<T>] {
        if k > self.max_length() {
            return &[];
        }
        let end = self.level_starts.get(k + 1).copied().unwrap_or(self.elements.len());
        &self.elements[self.level_starts[k]..end]
    }

    /// Elements whose length lies in `range`, in ShortLex order.
    pub fn in_range(&self, range: RangeInclusive<usize>) -> &[GroupElement<T>] {
        let lo = (*range.start()).min(self.max_length() + 1);
        let hi = (*range.end()).min(self.max_length());
        if lo > hi {
            return &[];
        }
        let start = self.level_starts[lo];
        let end = self.level_starts.get(hi + 1).copied().unwrap_or(self.elements.len());
        &self.elements[start..end]
    }

    pub fn counts_by_length(&self) -> Vec<usize> {
        (0..=self.max_length()).map(|k| self.level(k).len()).collect()
    }

    pub(crate) fn require_length(&self, need: usize) -> Result<()> {
        if need > self.max_length() {
            Err(Error::StoreTooShort {
                have: self.max_length(),
                need,
            })
        } else {
            Ok(())
        }
    }
}

/// Enumerates every element of length at most `max_length`.
pub fn enumerate<T: Real>(sys: &GeometricSystem<T>, max_length: usize) -> Result<ElementStore<T>> {
    enumerate_with(sys, max_length, &EnumerateOptions::default())
}

/// Breadth-first search over the Cayley graph.
///
/// Each element of length `k` is extended by every right ascent `s`
/// (`w(α_s)` positive), so all candidates have length `k + 1`. Parents are
/// visited in ShortLex order and generators in index order, so the first
/// word found for an element is its ShortLex-minimal reduced word.
pub fn enumerate_with<T: Real>(
    sys: &GeometricSystem<T>,
    max_length: usize,
    opts: &EnumerateOptions,
) -> Result<ElementStore<T>> {
    let n = sys.rank();
    let mut store = ElementStore::with_identity(n, opts);
    for k in 0..max_length {
        let parents = store.level(k);
        let candidates: Vec<(Word, DMatrix<T>)> = parents
            .par_iter()
            .flat_map_iter(|p| {
                (0..n)
                    .filter(|&s| p.is_right_ascent(s))
                    .map(|s| {
                        let mut word = p.word().to_vec();
                        word.push(s);
                        (word, p.matrix() * &sys.generators()[s])
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        store.level_starts.push(store.elements.len());
        for (word, m) in candidates {
            if linalg::max_abs(&m).as_f64() > opts.max_entry {
                return Err(Error::EntryOverflow {
                    limit: opts.max_entry,
                    length: k + 1,
                });
            }
            match store.lookup(&m, opts.dedup_grid) {
                Lookup::Found(_) => {}
                Lookup::Ambiguous(id, diff) => {
                    return Err(Error::FingerprintCollision {
                        a: format_word(&word),
                        b: format_word(store.get(id).word()),
                        diff,
                    })
                }
                Lookup::Missing => {
                    if let Some(cap) = opts.max_elements {
                        if store.len() >= cap {
                            return Err(Error::BudgetExceeded(cap));
                        }
                    }
                    store.push(GroupElement::from_parts(word, m));
                }
            }
        }
        if store.level(k + 1).is_empty() {
            // finite group exhausted; keep empty levels so max_length is honoured
            log::debug!("group exhausted at length {k}");
        }
    }
    Ok(store)
}

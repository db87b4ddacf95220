//! Group elements as reduced words with their representation matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::system::GeometricSystem;

/// Sequence of generator indices, read left to right as a product.
pub type Word = Vec<usize>;

/// Formats a word as dot-separated indices, `e` for the identity.
pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(".")
}

/// Parses a word. Letters are generator indices separated by `.`, `,` or
/// whitespace; without separators each digit is one letter. `e` and the empty
/// string denote the identity.
pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok(Vec::new());
    }
    let has_sep = t.contains(|c: char| c == '.' || c == ',' || c.is_whitespace());
    let letters: Vec<&str> = if has_sep {
        t.split(|c: char| c == '.' || c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect()
    } else {
        (0..t.len()).map(|k| &t[k..k + 1]).collect()
    };
    letters
        .into_iter()
        .map(|l| {
            let s: usize = l
                .parse()
                .map_err(|_| Error::Parse(format!("bad letter '{l}' in word '{text}'")))?;
            if s >= rank {
                return Err(Error::GeneratorOutOfRange { index: s, rank });
            }
            Ok(s)
        })
        .collect()
}

/// Product of generator matrices along a word, without reduction.
pub fn word_matrix<T: Real>(sys: &GeometricSystem<T>, word: &[usize]) -> Result<DMatrix<T>> {
    let n = sys.rank();
    let mut m = DMatrix::identity(n, n);
    for &s in word {
        m *= sys.generator(s)?;
    }
    Ok(m)
}

/// Coefficient sum of a vector in the basis of simple roots.
#[inline]
pub fn height<T: Real>(v: &DVector<T>) -> T {
    v.iter().fold(T::zero(), |a, x| a + *x)
}

/// A group element: a ShortLex-minimal reduced word and its matrix.
#[derive(Clone, Debug)]
pub struct GroupElement<T: Real> {
    word: Word,
    matrix: DMatrix<T>,
}

impl<T: Real> GroupElement<T> {
    pub fn identity(rank: usize) -> Self {
        Self {
            word: Vec::new(),
            matrix: DMatrix::identity(rank, rank),
        }
    }

    /// Trusted constructor for words already known to be reduced.
    pub(crate) fn from_parts(word: Word, matrix: DMatrix<T>) -> Self {
        Self { word, matrix }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act(&self, v: &DVector<T>) -> DVector<T> {
        &self.matrix * v
    }

    /// `w(α_s)` is a positive root, i.e. `ℓ(ws) > ℓ(w)`.
    pub fn is_right_ascent(&self, s: usize) -> bool {
        height(&self.matrix.column(s).into_owned()) > T::zero()
    }

    pub fn inverse(&self, sys: &GeometricSystem<T>) -> Self {
        let reversed: Word = self.word.iter().rev().copied().collect();
        element_of(sys, &reversed).expect("letters of a stored word are valid")
    }
}

/// The group element represented by an arbitrary word.
///
/// The word is reduced to its ShortLex-minimal form by repeatedly stripping
/// the smallest left descent: `s` is a left descent of `w` exactly when
/// `w⁻¹(α_s)` is a negative root. The matrix is recomputed from the reduced
/// word.
pub fn element_of<T: Real>(sys: &GeometricSystem<T>, word: &[usize]) -> Result<GroupElement<T>> {
    let reversed: Word = word.iter().rev().copied().collect();
    let mut inv = word_matrix(sys, &reversed)?;
    let mut reduced = Vec::with_capacity(word.len());
    for _ in 0..word.len() {
        let descent = (0..sys.rank()).find(|&s| height(&inv.column(s).into_owned()) < T::zero());
        match descent {
            Some(s) => {
                reduced.push(s);
                inv *= &sys.generators()[s];
            }
            None => break,
        }
    }
    let matrix = word_matrix(sys, &reduced)?;
    Ok(GroupElement {
        word: reduced,
        matrix,
    })
}

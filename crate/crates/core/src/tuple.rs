//! Mixed-radix indexing of `X^n`: `index = Σ x_i · |X|^(n-1-i)` with the
//! last coordinate varying fastest.

use crate::error::{Error, Result};
use crate::Elem;

/// Largest tuple space (`|X|^n`) a dense table may cover.
pub const MAX_TUPLE_SPACE: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TupleSpace {
    arity: usize,
    radix: usize,
    len: usize,
}

impl TupleSpace {
    pub fn new(arity: usize, radix: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let too_large = || Error::TupleSpaceTooLarge {
            size: radix,
            arity,
            limit: MAX_TUPLE_SPACE,
        };
        let exp = u32::try_from(arity).map_err(|_| too_large())?;
        let len = radix
            .checked_pow(exp)
            .filter(|&l| l <= MAX_TUPLE_SPACE)
            .ok_or_else(too_large)?;
        Ok(Self { arity, radix, len })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Weight of coordinate `k` in the index.
    pub fn stride(&self, k: usize) -> usize {
        self.radix.pow((self.arity - 1 - k) as u32)
    }

    pub fn index_of(&self, x: &[Elem]) -> usize {
        debug_assert_eq!(x.len(), self.arity);
        x.iter().fold(0, |acc, &xi| acc * self.radix + xi)
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [Elem]) {
        for slot in out.iter_mut().rev() {
            *slot = index % self.radix;
            index /= self.radix;
        }
    }

    pub fn tuple_at(&self, index: usize) -> Vec<Elem> {
        let mut out = vec![0; self.arity];
        self.decode_into(index, &mut out);
        out
    }

    pub fn cursor(&self) -> TupleCursor {
        TupleCursor {
            space: *self,
            index: 0,
            tuple: vec![0; self.arity],
        }
    }

    /// All tuples in index order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.len).map(|i| self.tuple_at(i))
    }
}

/// Odometer over a [`TupleSpace`] that avoids re-decoding each index.
#[derive(Debug, Clone)]
pub struct TupleCursor {
    space: TupleSpace,
    index: usize,
    tuple: Vec<Elem>,
}

impl TupleCursor {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn tuple(&self) -> &[Elem] {
        &self.tuple
    }

    /// Moves to the next tuple; returns `false` once the space is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.index + 1 >= self.space.len {
            self.index = self.space.len;
            return false;
        }
        self.index += 1;
        for slot in self.tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < self.space.radix {
                break;
            }
            *slot = 0;
        }
        true
    }
}

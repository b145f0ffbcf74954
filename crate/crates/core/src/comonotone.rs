//! Standard simplices `{x : x_σ(1) <= … <= x_σ(n)}` and comonotone pair scans.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::table::FunctionTable;
use crate::witness::Witness;
use crate::Elem;

pub const MAX_COMONOTONE_ARITY: usize = 4;

/// Permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Result<Vec<Vec<usize>>> {
    if n > MAX_COMONOTONE_ARITY {
        return Err(Error::ArityTooLarge {
            arity: n,
            max: MAX_COMONOTONE_ARITY,
        });
    }
    Ok((0..n).permutations(n).collect())
}

/// Bit `s` is set iff `key` lies in the simplex of `perms[s]` over `chain`.
fn simplex_mask(chain: &Lattice, key: &[Elem], perms: &[Vec<usize>]) -> u32 {
    perms.iter().enumerate().fold(0, |mask, (s, sigma)| {
        let sorted = sigma.windows(2).all(|w| chain.leq(key[w[0]], key[w[1]]));
        if sorted {
            mask | 1 << s
        } else {
            mask
        }
    })
}

pub(crate) enum Op {
    Meet,
    Join,
}

/// Scans pairs `(x, y)` whose keys share a simplex (keys live in the chain
/// `key_lattice`) and checks `f(x ⋆ y) = f(x) ⋆ f(y)`.
pub(crate) fn scan(
    f: &FunctionTable,
    key_lattice: &Lattice,
    key: impl Fn(&[Elem]) -> Vec<Elem>,
    op: Op,
) -> Result<Option<Witness>> {
    let perms = permutations(f.arity())?;
    let space = f.space();
    let tuples: Vec<Vec<Elem>> = space.iter().collect();
    let masks: Vec<u32> = tuples
        .iter()
        .map(|x| simplex_mask(key_lattice, &key(x), &perms))
        .collect();
    let (x_lat, y_lat) = (&**f.domain(), &**f.codomain());
    for (i, x) in tuples.iter().enumerate() {
        for (j, y) in tuples.iter().enumerate() {
            let shared = masks[i] & masks[j];
            if shared == 0 {
                continue;
            }
            let combined = x.iter().zip(y).fold(0, |acc, (&a, &b)| {
                let c = match op {
                    Op::Meet => x_lat.meet(a, b),
                    Op::Join => x_lat.join(a, b),
                };
                acc * space.radix() + c
            });
            let expected = match op {
                Op::Meet => y_lat.meet(f.at(i), f.at(j)),
                Op::Join => y_lat.join(f.at(i), f.at(j)),
            };
            if f.at(combined) != expected {
                return Ok(Some(Witness::Comonotone {
                    x: x.clone(),
                    y: y.clone(),
                    sigma: perms[shared.trailing_zeros() as usize].clone(),
                }));
            }
        }
    }
    Ok(None)
}

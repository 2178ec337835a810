//! Character counting by depth-first search over prime ideals.
//!
//! A character of the finite unit ideles is a choice of one local character
//! at each prime ideal, trivial at all but finitely many. The search walks
//! those choices directly, multiplying conductor norms and adding the images
//! of the tested global units, and records each one at its conductor norm.

use crate::quadfield::{FieldSpec, Splitting};
use crate::series::{CoeffArray, Mode};

use super::arith::odd_sieve_primes;
use super::characters::characters_mod2;
use super::fields::{local_models, odd_prime_unit_images, oracle_splitting, residue_roots, signed_weight, tested_units};
use super::OracleError;

pub const DFS_MAX_N: u64 = 100_000;
const TWO_ADIC_DEPTH: u32 = 5;

/// One prime ideal with its nontrivial local characters as
/// `(norm^f, bitmask of tested-unit images)`.
#[derive(Debug, Clone)]
struct IdealChars {
    norm: u64,
    chars: Vec<(u64, u32)>,
}

fn pack(bits: &[u8]) -> u32 {
    bits.iter().enumerate().map(|(i, &b)| (b as u32) << i).sum()
}

fn ideal_table(field: &FieldSpec, n: u64) -> Result<Vec<IdealChars>, OracleError> {
    let d = field.d();
    let names = tested_units(field);
    let mut out = Vec::new();
    for p in odd_sieve_primes(n) {
        let splitting = oracle_splitting(d, p);
        let norm = if splitting == Splitting::Inert { p * p } else { p };
        if norm > n {
            continue;
        }
        if p == 2 {
            for model in local_models(field, 2, TWO_ADIC_DEPTH)? {
                let chars = characters_mod2(&model.ring, TWO_ADIC_DEPTH)?
                    .into_iter()
                    .filter(|c| c.conductor > 0)
                    .filter_map(|c| {
                        let qf = norm.checked_pow(c.conductor)?;
                        let bits: Vec<u8> = names
                            .iter()
                            .map(|name| c.unit_images.iter().find(|(k, _)| k == name).unwrap().1)
                            .collect();
                        (qf <= n).then_some((qf, pack(&bits)))
                    })
                    .collect();
                out.push(IdealChars { norm, chars });
            }
            continue;
        }
        let roots = residue_roots(d, p);
        let count = if splitting == Splitting::Split { 2 } else { 1 };
        for i in 0..count {
            let root = roots.get(i).copied();
            let bits = odd_prime_unit_images(field, p, splitting, root);
            out.push(IdealChars {
                norm,
                chars: vec![(norm, pack(&bits))],
            });
        }
    }
    out.sort_by_key(|ic| ic.norm);
    Ok(out)
}

/// Unsigned and signed counts, plus the number of characters visited.
#[derive(Debug, Clone)]
pub struct DfsCounts {
    pub unsigned: CoeffArray,
    pub signed: CoeffArray,
    pub nodes: u64,
}

struct Walk<'a> {
    ideals: &'a [IdealChars],
    weights: Vec<i64>,
    n: u64,
    a0: Vec<i64>,
    am: Vec<i64>,
    nodes: u64,
}

impl Walk<'_> {
    fn visit(&mut self, start: usize, cond: u64, parity: u32) {
        self.nodes += 1;
        self.a0[cond as usize] += 1;
        self.am[cond as usize] += self.weights[parity as usize];
        for j in start..self.ideals.len() {
            let ideal = &self.ideals[j];
            if cond * ideal.norm > self.n {
                break;
            }
            for ci in 0..ideal.chars.len() {
                let (qf, bits) = self.ideals[j].chars[ci];
                let next = cond * qf;
                if next <= self.n {
                    self.visit(j + 1, next, parity ^ bits);
                }
            }
        }
    }
}

/// Both coefficient arrays of the field up to `n`, by exhaustive search.
pub fn ideal_dfs(field: &FieldSpec, n: u64) -> Result<DfsCounts, OracleError> {
    if n > DFS_MAX_N {
        return Err(OracleError::CapacityExceeded { n, max: DFS_MAX_N });
    }
    let ideals = ideal_table(field, n)?;
    let width = tested_units(field).len();
    let weights = (0..1u32 << width)
        .map(|mask| {
            let bits: Vec<u8> = (0..width).map(|i| ((mask >> i) & 1) as u8).collect();
            signed_weight(field, &bits)
        })
        .collect();
    let mut walk = Walk {
        ideals: &ideals,
        weights,
        n,
        a0: vec![0; n as usize + 1],
        am: vec![0; n as usize + 1],
        nodes: 0,
    };
    if n >= 1 {
        walk.visit(0, 1, 0);
    }
    Ok(DfsCounts {
        unsigned: CoeffArray::from_dense(field.d(), Mode::Ordinary, walk.a0),
        signed: CoeffArray::from_dense(field.d(), Mode::Signed, walk.am),
        nodes: walk.nodes,
    })
}

pub fn ideal_dfs_count(field: &FieldSpec, n: u64, signed: bool) -> Result<CoeffArray, OracleError> {
    let counts = ideal_dfs(field, n)?;
    Ok(if signed { counts.signed } else { counts.unsigned })
}

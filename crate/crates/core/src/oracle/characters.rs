//! Exhaustive unit groups and their `Z/2Z`-characters.

use std::collections::BTreeSet;

use serde::Serialize;

use super::ring::{Elem, FiniteRing};
use super::OracleError;

/// Units of a local finite ring: the complement of `πR`.
pub fn units(ring: &FiniteRing) -> Vec<Elem> {
    let maximal = ring.ideal_power(1);
    ring.elements()
        .filter(|&e| !maximal[ring.index(e)])
        .collect()
}

/// Elementary divisors (prime-power cyclic orders) of `R^×`, sorted ascending.
pub fn unit_group_structure(ring: &FiniteRing) -> Result<Vec<u64>, OracleError> {
    ring.check_size()?;
    let us = units(ring);
    let order = us.len() as u64;
    let mut divisors = Vec::new();
    let mut rest = order;
    let mut l = 2;
    while rest > 1 {
        if rest % l != 0 {
            l += 1;
            continue;
        }
        let mut l_part = 1;
        while rest % l == 0 {
            rest /= l;
            l_part *= l;
        }
        // ranks[j] = number of cyclic l-factors of order >= l^(j+1)
        let mut ranks = Vec::new();
        let mut powers = us.clone();
        let mut killed_prev = 1u64;
        loop {
            powers = powers.iter().map(|&u| ring.pow(u, l)).collect();
            let killed = powers.iter().filter(|&&u| u == ring.one()).count() as u64;
            let killed_l = gcd(killed, l_part);
            let mut ratio = killed_l / killed_prev;
            let mut r = 0;
            while ratio > 1 {
                ratio /= l;
                r += 1;
            }
            ranks.push(r);
            killed_prev = killed_l;
            if killed_l == l_part {
                break;
            }
        }
        for j in 0..ranks.len() {
            let next = ranks.get(j + 1).copied().unwrap_or(0);
            for _ in 0..(ranks[j] - next) {
                divisors.push(l.pow(j as u32 + 1));
            }
        }
        l += 1;
    }
    divisors.sort_unstable();
    Ok(divisors)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One homomorphism `R^× -> Z/2Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCharacter {
    /// Bitmask against the basis of `R^×/(R^×)^2` used by the enumeration.
    pub mask: u32,
    pub conductor: u32,
    /// Images (0 or 1) of the ring's designated units, in ring order.
    pub unit_images: Vec<(String, u8)>,
}

/// Coordinates of every unit in `R^×/(R^×)^2 ≅ F_2^r`.
pub(crate) struct SquareClasses {
    pub rank: u32,
    /// Indexed by ring element index; only unit entries are meaningful.
    pub coords: Vec<u32>,
    pub units: Vec<Elem>,
}

pub(crate) fn square_classes(ring: &FiniteRing) -> SquareClasses {
    let us = units(ring);
    let size = ring.size() as usize;
    let mut in_h = vec![false; size];
    let mut coords = vec![0u32; size];
    let mut members = Vec::new();
    for &u in &us {
        let sq = ring.mul(u, u);
        let i = ring.index(sq);
        if !in_h[i] {
            in_h[i] = true;
            members.push(sq);
        }
    }
    let mut rank = 0;
    for &u in &us {
        if in_h[ring.index(u)] {
            continue;
        }
        let bit = 1u32 << rank;
        rank += 1;
        let current = members.clone();
        for h in current {
            let e = ring.mul(h, u);
            let i = ring.index(e);
            in_h[i] = true;
            coords[i] = coords[ring.index(h)] | bit;
            members.push(e);
        }
    }
    SquareClasses {
        rank,
        coords,
        units: us,
    }
}

/// Units congruent to 1 mod `π^f`; `f = 0` gives all units.
pub fn filtration(ring: &FiniteRing, units: &[Elem], f: u32) -> Vec<Elem> {
    if f == 0 {
        return units.to_vec();
    }
    let ideal = ring.ideal_power(f);
    units
        .iter()
        .copied()
        .filter(|&u| ideal[ring.index(ring.sub(u, ring.one()))])
        .collect()
}

/// All characters `R^× -> Z/2Z` with their local conductors.
///
/// The conductor of `χ` is the least `f` with `1 + π^f R` inside its kernel.
/// A character whose conductor exceeds `depth` means the ring is too coarse
/// to model the filtration faithfully.
pub fn characters_mod2(ring: &FiniteRing, depth: u32) -> Result<Vec<LocalCharacter>, OracleError> {
    ring.check_size()?;
    let classes = square_classes(ring);
    let precision = ring.precision();
    // distinct square-class coordinates met by each filtration step
    let levels: Vec<BTreeSet<u32>> = (0..=precision)
        .map(|f| {
            filtration(ring, &classes.units, f)
                .iter()
                .map(|&u| classes.coords[ring.index(u)])
                .collect()
        })
        .collect();
    let parity = |v: u32, c: u32| ((v & c).count_ones() % 2) as u8;

    let mut out = Vec::new();
    for mask in 0..(1u32 << classes.rank) {
        let conductor = (0..=precision)
            .find(|&f| levels[f as usize].iter().all(|&v| parity(v, mask) == 0))
            .unwrap_or(precision);
        if conductor > depth {
            return Err(OracleError::DepthInsufficient {
                ring: ring.label().to_string(),
                conductor,
                depth,
            });
        }
        let unit_images = ring
            .designated_units()
            .iter()
            .map(|(name, u)| (name.clone(), parity(classes.coords[ring.index(*u)], mask)))
            .collect();
        out.push(LocalCharacter {
            mask,
            conductor,
            unit_images,
        });
    }
    out.sort_by_key(|c| (c.conductor, c.mask));
    Ok(out)
}

/// `[U : U^(n) U^2]`, counted from the subgroup itself.
pub fn square_class_index(ring: &FiniteRing, n: u32) -> u64 {
    let us = units(ring);
    let size = ring.size() as usize;
    let mut in_sub = vec![false; size];
    let squares: BTreeSet<Elem> = us.iter().map(|&u| ring.mul(u, u)).collect();
    for v in filtration(ring, &us, n) {
        for &s in &squares {
            in_sub[ring.index(ring.mul(v, s))] = true;
        }
    }
    let sub = in_sub.iter().filter(|&&b| b).count() as u64;
    us.len() as u64 / sub
}

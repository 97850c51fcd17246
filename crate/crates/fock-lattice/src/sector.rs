use crate::error::{LatticeError, Result};
use crate::grid::LatticeGrid;

pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

/// Occupation numbers, one per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationState {
    pub occupations: Vec<u8>,
}

impl OccupationState {
    pub fn new(occupations: Vec<u8>) -> Self {
        Self { occupations }
    }

    pub fn particle_count(&self) -> usize {
        self.occupations.iter().map(|&k| k as usize).sum()
    }
}

/// Exact binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Dimension C(N + n - 1, N) of the N-boson sector on n sites.
pub fn sector_dimension(n_sites: usize, n_particles: usize) -> u128 {
    binomial((n_particles + n_sites - 1) as u64, n_particles as u64)
}

/// All occupation vectors of `n_particles` bosons on the grid, in ascending
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct FockSector {
    grid: LatticeGrid,
    n_particles: usize,
    dim: usize,
    occ: Vec<u8>,
    // counts[k][m]: number of occupation vectors on k sites holding m particles
    counts: Vec<Vec<u64>>,
}

impl FockSector {
    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn particle_count(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_sites(&self) -> usize {
        self.grid.n_sites()
    }

    pub fn occupation(&self, index: usize) -> &[u8] {
        let n = self.n_sites();
        &self.occ[index * n..(index + 1) * n]
    }

    pub fn state(&self, index: usize) -> OccupationState {
        OccupationState::new(self.occupation(index).to_vec())
    }

    pub fn basis(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.occ.chunks_exact(self.n_sites().max(1)).take(self.dim)
    }

    /// Rank of an occupation vector with this sector's site count, for any total
    /// particle number up to this sector's. Returns `None` if the vector is not of
    /// the right length or holds too many particles.
    pub fn rank_any(&self, occupations: &[u8]) -> Option<usize> {
        let n = self.n_sites();
        if occupations.len() != n {
            return None;
        }
        let total: usize = occupations.iter().map(|&k| k as usize).sum();
        if total > self.n_particles {
            return None;
        }
        let mut rank: u64 = 0;
        let mut remaining = total;
        for (i, &k) in occupations.iter().enumerate().take(n - 1) {
            let sites_after = n - i - 1;
            for v in 0..k as usize {
                rank += self.counts[sites_after][remaining - v];
            }
            remaining -= k as usize;
        }
        Some(rank as usize)
    }

    /// Basis index of an occupation vector belonging to this sector.
    pub fn index_of(&self, occupations: &[u8]) -> Option<usize> {
        let total: usize = occupations.iter().map(|&k| k as usize).sum();
        if total != self.n_particles {
            return None;
        }
        self.rank_any(occupations)
    }

    /// Sector with a different particle number on the same grid.
    pub fn with_particles(&self, n_particles: usize) -> Result<Self> {
        build_sector_with_cap(self.grid, n_particles, self.dim.max(DEFAULT_DIMENSION_CAP))
    }
}

pub fn build_sector(grid: LatticeGrid, n_particles: usize) -> Result<FockSector> {
    build_sector_with_cap(grid, n_particles, DEFAULT_DIMENSION_CAP)
}

pub fn build_sector_with_cap(grid: LatticeGrid, n_particles: usize, cap: usize) -> Result<FockSector> {
    if n_particles > u8::MAX as usize {
        return Err(LatticeError::Capacity {
            what: "particle number",
            size: n_particles as u128,
            cap: u8::MAX as u128,
        });
    }
    let n = grid.n_sites();
    let dim128 = sector_dimension(n, n_particles);
    if dim128 > cap as u128 {
        return Err(LatticeError::Capacity { what: "sector dimension", size: dim128, cap: cap as u128 });
    }
    let dim = dim128 as usize;

    let mut counts = vec![vec![0u64; n_particles + 1]; n + 1];
    counts[0][0] = 1;
    for k in 1..=n {
        for m in 0..=n_particles {
            counts[k][m] = sector_dimension(k, m) as u64;
        }
    }

    let mut occ = Vec::with_capacity(dim * n);
    let mut current = vec![0u8; n];
    enumerate(&mut current, 0, n_particles, &mut occ);
    debug_assert_eq!(occ.len(), dim * n);

    Ok(FockSector { grid, n_particles, dim, occ, counts })
}

fn enumerate(current: &mut [u8], site: usize, remaining: usize, out: &mut Vec<u8>) {
    let n = current.len();
    if site + 1 == n {
        current[site] = remaining as u8;
        out.extend_from_slice(current);
        return;
    }
    for v in 0..=remaining {
        current[site] = v as u8;
        enumerate(current, site + 1, remaining - v, out);
    }
    current[site] = 0;
}

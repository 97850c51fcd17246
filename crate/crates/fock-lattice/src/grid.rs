use crate::error::{LatticeError, Result};

/// Periodic 1-D grid of `n_sites` points spaced by `spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGrid {
    n_sites: usize,
    spacing: f64,
}

impl LatticeGrid {
    pub fn new(n_sites: usize, spacing: f64) -> Result<Self> {
        if n_sites == 0 {
            return Err(LatticeError::InvalidGrid("n_sites must be positive".into()));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(LatticeError::InvalidGrid(format!(
                "spacing must be positive and finite, got {spacing}"
            )));
        }
        Ok(Self { n_sites, spacing })
    }

    /// Grid covering a circle of circumference `length`.
    pub fn with_length(n_sites: usize, length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(LatticeError::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        Self::new(n_sites, length / n_sites.max(1) as f64)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn length(&self) -> f64 {
        self.n_sites as f64 * self.spacing
    }

    pub fn periodic(&self) -> bool {
        true
    }

    /// Same circumference, different resolution.
    pub fn refined(&self, n_sites: usize) -> Result<Self> {
        Self::with_length(n_sites, self.length())
    }

    pub fn coordinate(&self, site: usize) -> f64 {
        site as f64 * self.spacing
    }

    /// Coordinate measured from the middle of the box, in [-l/2, l/2).
    pub fn centered_coordinate(&self, site: usize) -> f64 {
        site as f64 * self.spacing - 0.5 * self.length()
    }

    pub fn wrap(&self, site: isize) -> usize {
        site.rem_euclid(self.n_sites as isize) as usize
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site < self.n_sites {
            Ok(())
        } else {
            Err(LatticeError::SiteOutOfRange { site, n_sites: self.n_sites })
        }
    }

    /// Plain coordinate difference x_i - x_j with both points in [0, l).
    pub fn displacement(&self, i: usize, j: usize) -> f64 {
        (i as f64 - j as f64) * self.spacing
    }

    /// Minimum-image difference on the circle, in [-l/2, l/2).
    pub fn minimum_image(&self, i: usize, j: usize) -> f64 {
        let n = self.n_sites as isize;
        let mut d = (i as isize - j as isize).rem_euclid(n);
        if 2 * d >= n {
            d -= n;
        }
        d as f64 * self.spacing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_is_product() {
        let g = LatticeGrid::new(7, 0.25).unwrap();
        assert_eq!(g.length(), 1.75);
        assert!(g.periodic());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LatticeGrid::new(0, 1.0).is_err());
        assert!(LatticeGrid::new(4, 0.0).is_err());
        assert!(LatticeGrid::with_length(4, -1.0).is_err());
    }

    #[test]
    fn minimum_image_range() {
        let g = LatticeGrid::new(6, 1.0).unwrap();
        assert_eq!(g.minimum_image(0, 1), -1.0);
        assert_eq!(g.minimum_image(1, 0), 1.0);
        assert_eq!(g.minimum_image(0, 3), -3.0);
        assert_eq!(g.minimum_image(5, 0), -1.0);
        assert_eq!(g.displacement(5, 0), 5.0);
    }

    #[test]
    fn wrap_negative() {
        let g = LatticeGrid::new(5, 1.0).unwrap();
        assert_eq!(g.wrap(-1), 4);
        assert_eq!(g.wrap(5), 0);
    }
}

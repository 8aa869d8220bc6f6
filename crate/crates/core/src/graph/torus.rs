use crate::error::{Result, SpectralError};

/// The periodic lattice (ℤ/Lℤ)^d with nearest-neighbour edges ±1 along each axis.
///
/// Sites are stored in row-major order with axis 0 varying slowest. For
/// `L = 2` the two neighbours along an axis coincide and the edge is counted
/// twice, so every site keeps exactly `2d` neighbour slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeTorus {
    dim: usize,
    side: usize,
}

impl LatticeTorus {
    pub fn new(dim: usize, side: usize) -> Result<Self> {
        if dim == 0 {
            return Err(SpectralError::Domain("lattice dimension must be ≥ 1".into()));
        }
        if side < 2 {
            return Err(SpectralError::Domain("lattice side must be ≥ 2".into()));
        }
        side.checked_pow(dim as u32)
            .ok_or(SpectralError::Overflow("lattice site count"))?;
        Ok(LatticeTorus { dim, side })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn stride(&self, axis: usize) -> usize {
        self.side.pow((self.dim - 1 - axis) as u32)
    }

    pub fn coords(&self, idx: usize) -> Vec<usize> {
        (0..self.dim)
            .map(|axis| (idx / self.stride(axis)) % self.side)
            .collect()
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .fold(0, |acc, &c| acc * self.side + c % self.side)
    }

    /// Site reached from `idx` by one step of `+1` (`forward`) or `-1` along `axis`.
    pub fn step(&self, idx: usize, axis: usize, forward: bool) -> usize {
        let stride = self.stride(axis);
        let c = (idx / stride) % self.side;
        let next = if forward {
            (c + 1) % self.side
        } else {
            (c + self.side - 1) % self.side
        };
        idx - c * stride + next * stride
    }

    /// The `2d` neighbour slots of a site.
    pub fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).flat_map(move |axis| [self.step(idx, axis, true), self.step(idx, axis, false)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for d in 1..=3 {
            for l in 2..=6 {
                let t = LatticeTorus::new(d, l).unwrap();
                assert_eq!(t.len(), l.pow(d as u32));
                for i in 0..t.len() {
                    assert_eq!(t.neighbors(i).count(), 2 * d);
                    assert_eq!(t.index(&t.coords(i)), i);
                }
            }
        }
    }

    #[test]
    fn periodic_steps() {
        let t = LatticeTorus::new(2, 4).unwrap();
        let origin = t.index(&[0, 0]);
        assert_eq!(t.coords(t.step(origin, 0, false)), vec![3, 0]);
        assert_eq!(t.coords(t.step(origin, 1, false)), vec![0, 3]);
        assert_eq!(t.coords(t.step(t.index(&[3, 3]), 1, true)), vec![3, 0]);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(LatticeTorus::new(0, 4).is_err());
        assert!(LatticeTorus::new(2, 1).is_err());
    }
}

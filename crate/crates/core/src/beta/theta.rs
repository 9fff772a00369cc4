use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pinned {
    /// `r_1` sits at the origin.
    Red,
    /// `b_1` sits at the origin.
    Blue,
}

/// Red and blue points in `R^d` with `r_1` or `b_1` at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub dim: usize,
    /// Flat row-major coordinates.
    pub red: Vec<f64>,
    pub blue: Vec<f64>,
    pub pinned: Pinned,
}

impl Configuration {
    pub fn new(dim: usize, red: Vec<f64>, blue: Vec<f64>, pinned: Pinned) -> Result<Self> {
        if dim == 0 || !red.len().is_multiple_of(dim) || !blue.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter("coordinate count is not a multiple of the dimension".into()));
        }
        let first = match pinned {
            Pinned::Red => red.get(..dim),
            Pinned::Blue => blue.get(..dim),
        };
        match first {
            Some(p) if p.iter().all(|&c| c == 0.0) => {}
            _ => return Err(Error::InvalidParameter("pinned point must be at the origin".into())),
        }
        Ok(Configuration { dim, red, blue, pinned })
    }

    pub fn k_red(&self) -> usize {
        self.red.len() / self.dim
    }

    pub fn k_blue(&self) -> usize {
        self.blue.len() / self.dim
    }
}

/// Whether the cross-color graph with edges `|r_i - b_j| < 1` connects all
/// points.
pub fn theta_membership(config: &Configuration) -> bool {
    unit_connected(&config.red, &config.blue, config.dim)
}

/// A single point counts as connected; two or more points of one color
/// alone never are.
pub(crate) fn unit_connected(red: &[f64], blue: &[f64], dim: usize) -> bool {
    let kr = red.len() / dim;
    let kb = blue.len() / dim;
    let k = kr + kb;
    if k <= 1 {
        return true;
    }
    if kr == 0 || kb == 0 {
        return false;
    }
    debug_assert!(k <= 64);
    let close = |i: usize, j: usize| -> bool {
        let (a, b) = (&red[i * dim..(i + 1) * dim], &blue[j * dim..(j + 1) * dim]);
        let mut s = 0.0;
        for (x, y) in a.iter().zip(b) {
            s += (x - y) * (x - y);
        }
        s < 1.0
    };
    // vertices 0..kr red, kr..k blue
    let mut seen: u64 = 1;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        if v < kr {
            for j in 0..kb {
                let bit = 1u64 << (kr + j);
                if seen & bit == 0 && close(v, j) {
                    seen |= bit;
                    stack.push(kr + j);
                }
            }
        } else {
            for i in 0..kr {
                let bit = 1u64 << i;
                if seen & bit == 0 && close(i, v - kr) {
                    seen |= bit;
                    stack.push(i);
                }
            }
        }
    }
    seen.count_ones() as usize == k
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(red: &[f64], blue: &[f64]) -> Configuration {
        Configuration::new(1, red.to_vec(), blue.to_vec(), Pinned::Red).unwrap()
    }

    #[test]
    fn line_examples() {
        assert!(theta_membership(&line(&[0.0], &[0.5])));
        assert!(!theta_membership(&line(&[0.0], &[1.2])));
        assert!(theta_membership(&line(&[0.0, 1.6], &[0.8])));
        assert!(!theta_membership(&line(&[0.0], &[1.0])));
    }

    #[test]
    fn pinned_point_must_be_origin() {
        assert!(Configuration::new(1, vec![0.5], vec![0.0], Pinned::Red).is_err());
        assert!(Configuration::new(1, vec![0.5], vec![0.0], Pinned::Blue).is_ok());
    }

    proptest! {
        #[test]
        fn adding_a_close_point_keeps_membership(
            steps in prop::collection::vec((any::<prop::sample::Index>(), -0.99f64..0.99, any::<bool>()), 0..8),
            last in (any::<prop::sample::Index>(), -0.99f64..0.99, any::<bool>()),
        ) {
            // grow a member configuration by attaching points near the
            // opposite color, starting from a connected pair
            let mut red = vec![0.0];
            let mut blue = vec![0.5];
            prop_assert!(unit_connected(&red, &blue, 1));
            for (pick, t, to_red) in steps.into_iter().chain(std::iter::once(last)) {
                if to_red {
                    let anchor = blue[pick.index(blue.len())];
                    red.push(anchor + t);
                } else {
                    let anchor = red[pick.index(red.len())];
                    blue.push(anchor + t);
                }
                prop_assert!(unit_connected(&red, &blue, 1));
            }
        }
    }
}

use serde::{Deserialize, Serialize};

/// Two components of sizes `size_a` and `size_b` merge at threshold `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub z: f64,
    pub size_a: usize,
    pub size_b: usize,
}

/// Union events of Kruskal's algorithm in nondecreasing threshold order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeProfile {
    vertex_count: usize,
    events: Vec<MergeEvent>,
}

impl MergeProfile {
    pub(crate) fn new(vertex_count: usize, events: Vec<MergeEvent>) -> Self {
        debug_assert!(events.windows(2).all(|w| w[0].z <= w[1].z));
        MergeProfile {
            vertex_count,
            events,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    pub fn is_connected(&self) -> bool {
        self.events.len() + 1 == self.vertex_count
    }

    /// Number of components of the threshold graph `G(z)` (edges of weight
    /// at most `z`).
    pub fn components_at(&self, z: f64) -> usize {
        self.vertex_count - self.events.iter().take_while(|e| e.z <= z).count()
    }
}

/// `int_0^inf (C_{G(z)} - 1) dz`, the sum of all merge thresholds.
///
/// For a connected graph this is the MST weight.
pub fn component_integral(profile: &MergeProfile) -> f64 {
    profile.events.iter().map(|e| e.z).sum()
}

/// How a merge changes the number of components with at least `k` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Jump {
    /// Two components below `k` form one of size at least `k`.
    Up,
    /// Two components of size at least `k` merge.
    Down,
    Neutral,
}

pub fn classify(event: &MergeEvent, k: usize) -> Jump {
    let big_a = event.size_a >= k;
    let big_b = event.size_b >= k;
    if big_a && big_b {
        Jump::Down
    } else if !big_a && !big_b && event.size_a + event.size_b >= k {
        Jump::Up
    } else {
        Jump::Neutral
    }
}

/// `int_0^inf (C_{k,G(z)} - 1) dz` where `C_k` counts components with at
/// least `k` vertices, computed as `sum_{down jumps} z - sum_{up jumps} z`.
///
/// For `k = 1` this is [`component_integral`]. The value is only meaningful
/// for `k <= vertex_count`.
pub fn ck_integral(profile: &MergeProfile, k: usize) -> f64 {
    if k <= 1 {
        return component_integral(profile);
    }
    profile
        .events
        .iter()
        .map(|e| match classify(e, k) {
            Jump::Down => e.z,
            Jump::Up => -e.z,
            Jump::Neutral => 0.0,
        })
        .sum()
}

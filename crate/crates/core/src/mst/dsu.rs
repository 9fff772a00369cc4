/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
            components: len,
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            let gp = self.parent[self.parent[i] as usize];
            self.parent[i] = gp;
            i = gp as usize;
        }
        i
    }

    /// Size of the set containing `i`.
    pub fn size_of(&mut self, i: usize) -> usize {
        let r = self.find(i);
        self.size[r] as usize
    }

    /// Merges the sets of `a` and `b`. Returns the sizes of the two sets
    /// before the merge, or `None` if they were already one set.
    pub fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (sa, sb) = (self.size[ra], self.size[rb]);
        let (big, small) = if sa >= sb { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big as u32;
        self.size[big] = sa + sb;
        self.components -= 1;
        Some((sa as usize, sb as usize))
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_reports_sizes() {
        let mut s = DisjointSets::new(5);
        assert_eq!(s.union(0, 1), Some((1, 1)));
        assert_eq!(s.union(2, 1), Some((1, 2)));
        assert_eq!(s.union(0, 2), None);
        assert_eq!(s.size_of(1), 3);
        assert_eq!(s.components(), 3);
    }
}

//! Collision-free per-thread accumulator mapping community ids to weights: a
//! dense f64 array indexed by community id plus an occupancy list so a reset
//! costs O(keys touched) instead of O(capacity).

#[derive(Debug)]
pub struct CommunityScanTable {
    weight: Vec<f64>,
    touched: Vec<u32>,
}

impl CommunityScanTable {
    pub fn new(capacity: usize) -> Self {
        CommunityScanTable {
            weight: vec![0.0; capacity],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, community: u32, weight: f64) {
        debug_assert!(weight > 0.0);
        let slot = &mut self.weight[community as usize];
        if *slot == 0.0 {
            self.touched.push(community);
        }
        *slot += weight;
    }

    #[inline]
    pub fn get(&self, community: u32) -> f64 {
        self.weight[community as usize]
    }

    pub fn len(&self) -> usize {
        self.touched.len()
    }

    pub fn is_empty(&self) -> bool {
        self.touched.is_empty()
    }

    /// Touched (community, weight) pairs in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.touched.iter().map(move |&c| (c, self.weight[c as usize]))
    }

    pub fn clear(&mut self) {
        for c in self.touched.drain(..) {
            self.weight[c as usize] = 0.0;
        }
    }
}

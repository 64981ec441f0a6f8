//! Fenwick tree over nonnegative f64 weights with sampling by prefix sum.
//! Growth processes select one element per step among hundreds of thousands,
//! so both the weight updates and the selection must be logarithmic.

/// Binary indexed tree storing a weight per slot.
#[derive(Debug, Clone, Default)]
pub struct Fenwick {
    tree: Vec<f64>,
    values: Vec<f64>,
}

impl Fenwick {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Appends a slot and returns its index.
    pub fn push(&mut self, weight: f64) -> usize {
        debug_assert!(weight >= 0.0 && weight.is_finite());
        let index = self.values.len();
        self.values.push(0.0);
        self.tree.push(0.0);
        // Fold in the partial sums this new node covers.
        let pos = index + 1;
        let lsb = pos & pos.wrapping_neg();
        let mut child = pos - 1;
        let bound = pos - lsb;
        while child > bound {
            self.tree[index] += self.tree[child - 1];
            child -= child & child.wrapping_neg();
        }
        self.set(index, weight);
        index
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Sets the weight of a slot.
    pub fn set(&mut self, index: usize, weight: f64) {
        debug_assert!(weight >= 0.0 && weight.is_finite());
        let delta = weight - self.values[index];
        self.values[index] = weight;
        let mut pos = index + 1;
        while pos <= self.tree.len() {
            self.tree[pos - 1] += delta;
            pos += pos & pos.wrapping_neg();
        }
    }

    pub fn total(&self) -> f64 {
        self.prefix(self.values.len())
    }

    /// Sum of the first `count` weights.
    pub fn prefix(&self, count: usize) -> f64 {
        let mut sum = 0.0;
        let mut pos = count;
        while pos > 0 {
            sum += self.tree[pos - 1];
            pos -= pos & pos.wrapping_neg();
        }
        sum
    }

    /// The slot containing the point `target` of the cumulative weight line:
    /// the smallest index whose prefix sum exceeds `target`. Targets at or
    /// beyond the total land on the last positive slot.
    pub fn select(&self, target: f64) -> usize {
        let mut pos = 0usize;
        let mut remaining = target.max(0.0);
        let mut mask = self.tree.len().next_power_of_two();
        while mask > 0 {
            let next = pos + mask;
            if next <= self.tree.len() && self.tree[next - 1] <= remaining {
                remaining -= self.tree[next - 1];
                pos = next;
            }
            mask >>= 1;
        }
        // Float drift can push the target past every slot; fall back to the
        // last slot with positive weight.
        if pos >= self.values.len() {
            return self
                .values
                .iter()
                .rposition(|&w| w > 0.0)
                .expect("select on all-zero weights");
        }
        pos
    }
}

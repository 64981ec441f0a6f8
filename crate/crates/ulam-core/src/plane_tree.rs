//! Finite plane trees: prefix-closed address sets with contiguous child
//! indices.

use std::collections::BTreeMap;

use crate::{UlamAddress, UlamError};

/// A finite plane tree: a nonempty, prefix-closed set of addresses in which
/// vertex u has children u.1, ..., u.deg(u) exactly.
///
/// Vertices iterate in address order (ancestors before descendants), which
/// all serialization formats rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneTree {
    out_degrees: BTreeMap<UlamAddress, u32>,
}

impl PlaneTree {
    /// The tree consisting of the root alone.
    pub fn root_only() -> Self {
        let mut out_degrees = BTreeMap::new();
        out_degrees.insert(UlamAddress::root(), 0);
        Self { out_degrees }
    }

    /// Builds a tree from an arbitrary vertex set, validating prefix closure
    /// and child contiguity.
    pub fn from_vertices<I>(vertices: I) -> Result<Self, UlamError>
    where
        I: IntoIterator<Item = UlamAddress>,
    {
        let mut out_degrees: BTreeMap<UlamAddress, u32> = BTreeMap::new();
        for v in vertices {
            out_degrees.entry(v).or_insert(0);
        }
        if !out_degrees.contains_key(&UlamAddress::root()) {
            return Err(UlamError::BrokenPrefixClosure {
                address: UlamAddress::root(),
            });
        }
        // Recompute degrees from the children actually present.
        let addresses: Vec<UlamAddress> = out_degrees.keys().cloned().collect();
        for v in &addresses {
            if let Some(parent) = v.parent() {
                match out_degrees.get_mut(&parent) {
                    Some(deg) => *deg = (*deg).max(v.last_letter().expect("not root")),
                    None => return Err(UlamError::BrokenPrefixClosure { address: v.clone() }),
                }
            }
        }
        let tree = Self { out_degrees };
        tree.validate()?;
        Ok(tree)
    }

    /// Checks prefix closure and child contiguity of the whole tree. Cheap
    /// local checks run during construction; this full pass is for external
    /// data and for debug assertions after bulk operations.
    pub fn validate(&self) -> Result<(), UlamError> {
        if !self.out_degrees.contains_key(&UlamAddress::root()) {
            return Err(UlamError::BrokenPrefixClosure {
                address: UlamAddress::root(),
            });
        }
        let mut child_counts: BTreeMap<&UlamAddress, u32> = BTreeMap::new();
        for v in self.out_degrees.keys() {
            if let Some(parent) = v.parent() {
                let letter = v.last_letter().expect("not root");
                match self.out_degrees.get(&parent) {
                    None => {
                        return Err(UlamError::BrokenPrefixClosure { address: v.clone() });
                    }
                    Some(&deg) if letter > deg => {
                        return Err(UlamError::BrokenContiguity {
                            address: parent.clone(),
                            expected: deg,
                            found: letter,
                        });
                    }
                    Some(_) => {}
                }
                *child_counts
                    .entry(self.out_degrees.get_key_value(&parent).expect("present").0)
                    .or_insert(0) += 1;
            }
        }
        for (v, &deg) in &self.out_degrees {
            let found = child_counts.get(v).copied().unwrap_or(0);
            if found != deg {
                return Err(UlamError::BrokenContiguity {
                    address: v.clone(),
                    expected: deg,
                    found,
                });
            }
        }
        Ok(())
    }

    /// Validates in debug builds only.
    pub fn debug_validate(&self) {
        #[cfg(debug_assertions)]
        self.validate().expect("plane tree invariant broken");
    }

    pub fn len(&self) -> usize {
        self.out_degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: &UlamAddress) -> bool {
        self.out_degrees.contains_key(v)
    }

    /// Number of children of v, or None if v is not a vertex.
    pub fn out_degree(&self, v: &UlamAddress) -> Option<u32> {
        self.out_degrees.get(v).copied()
    }

    /// Vertices in address order (ancestors before descendants).
    pub fn vertices(&self) -> impl Iterator<Item = &UlamAddress> {
        self.out_degrees.keys()
    }

    /// Vertices of the subtree rooted at v, in address order.
    pub fn subtree(&self, v: &UlamAddress) -> impl Iterator<Item = &UlamAddress> {
        let v = v.clone();
        self.out_degrees
            .range(v.clone()..)
            .map(|(u, _)| u)
            .take_while(move |u| v.is_prefix_of(u))
    }

    /// Attaches a new rightmost child to `parent` and returns its address.
    pub fn attach(&mut self, parent: &UlamAddress) -> Result<UlamAddress, UlamError> {
        let deg = self
            .out_degrees
            .get_mut(parent)
            .ok_or_else(|| UlamError::NotInTree {
                address: parent.clone(),
            })?;
        *deg += 1;
        let child = parent.child(*deg);
        self.out_degrees.insert(child.clone(), 0);
        Ok(child)
    }

    /// Leaves of the tree: vertices with no children.
    pub fn leaves(&self) -> impl Iterator<Item = &UlamAddress> {
        self.out_degrees
            .iter()
            .filter(|(_, &deg)| deg == 0)
            .map(|(v, _)| v)
    }

    /// Height of the tree: the maximal vertex height.
    pub fn height(&self) -> usize {
        self.out_degrees
            .keys()
            .map(|v| v.height())
            .max()
            .expect("tree is nonempty")
    }
}

/// Maps a live set of addresses to dense indices for matrix-shaped work.
#[derive(Debug, Clone, Default)]
pub struct AddressInterner {
    indices: BTreeMap<UlamAddress, usize>,
    addresses: Vec<UlamAddress>,
}

impl AddressInterner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of the address, allocating the next dense index if new.
    pub fn intern(&mut self, address: &UlamAddress) -> usize {
        if let Some(&idx) = self.indices.get(address) {
            return idx;
        }
        let idx = self.addresses.len();
        self.indices.insert(address.clone(), idx);
        self.addresses.push(address.clone());
        idx
    }

    pub fn get(&self, address: &UlamAddress) -> Option<usize> {
        self.indices.get(address).copied()
    }

    pub fn resolve(&self, index: usize) -> &UlamAddress {
        &self.addresses[index]
    }

    pub fn len(&self) -> usize {
        self.addresses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.addresses.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(s: &str) -> UlamAddress {
        s.parse().unwrap()
    }

    #[test]
    fn attach_assigns_contiguous_indices() {
        let mut tree = PlaneTree::root_only();
        let a = tree.attach(&UlamAddress::root()).unwrap();
        let b = tree.attach(&UlamAddress::root()).unwrap();
        assert_eq!(a, addr("1"));
        assert_eq!(b, addr("2"));
        let c = tree.attach(&a).unwrap();
        assert_eq!(c, addr("1.1"));
        tree.validate().unwrap();
        assert_eq!(tree.out_degree(&UlamAddress::root()), Some(2));
    }

    #[test]
    fn attach_outside_tree_fails() {
        let mut tree = PlaneTree::root_only();
        assert!(matches!(
            tree.attach(&addr("5")),
            Err(UlamError::NotInTree { .. })
        ));
    }

    #[test]
    fn from_vertices_validates_closure_and_contiguity() {
        assert!(PlaneTree::from_vertices(vec![
            UlamAddress::root(),
            addr("1"),
            addr("2"),
            addr("1.1")
        ])
        .is_ok());
        // 2 without 1 breaks contiguity.
        assert!(PlaneTree::from_vertices(vec![UlamAddress::root(), addr("2")]).is_err());
        // 1.1 without 1 breaks prefix closure.
        assert!(PlaneTree::from_vertices(vec![UlamAddress::root(), addr("1.1")]).is_err());
        // Missing root.
        assert!(PlaneTree::from_vertices(vec![addr("1")]).is_err());
    }

    #[test]
    fn subtree_returns_descendants_only() {
        let tree = PlaneTree::from_vertices(vec![
            UlamAddress::root(),
            addr("1"),
            addr("2"),
            addr("1.1"),
            addr("1.2"),
            addr("2.1"),
        ])
        .unwrap();
        let sub: Vec<String> = tree.subtree(&addr("1")).map(|v| v.to_string()).collect();
        assert_eq!(sub, vec!["1", "1.1", "1.2"]);
        // "1.9" sorts before "2" but after "1"; make sure it is excluded.
        let sub2: Vec<String> = tree.subtree(&addr("2")).map(|v| v.to_string()).collect();
        assert_eq!(sub2, vec!["2", "2.1"]);
    }

    #[test]
    fn leaves_and_height() {
        let tree = PlaneTree::from_vertices(vec![
            UlamAddress::root(),
            addr("1"),
            addr("1.1"),
            addr("2"),
        ])
        .unwrap();
        let leaves: Vec<String> = tree.leaves().map(|v| v.to_string()).collect();
        assert_eq!(leaves, vec!["1.1", "2"]);
        assert_eq!(tree.height(), 2);
    }

    #[test]
    fn interner_allocates_dense_indices() {
        let mut interner = AddressInterner::new();
        let i = interner.intern(&addr("1.2"));
        let j = interner.intern(&addr("3"));
        assert_eq!(interner.intern(&addr("1.2")), i);
        assert_eq!((i, j), (0, 1));
        assert_eq!(interner.resolve(1), &addr("3"));
        assert_eq!(interner.len(), 2);
    }
}

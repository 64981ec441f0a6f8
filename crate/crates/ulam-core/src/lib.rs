//! Addresses, rays, and plane trees on the infinite genealogical tree whose
//! vertices are finite words of positive integers.
//!
//! [`UlamAddress`] is one such word (the root is the empty word),
//! [`Ray`] is an infinite path materialized letter by letter, and
//! [`PlaneTree`] is a finite, prefix-closed set of addresses with contiguous
//! child indices. Addresses serialize as dot-separated integers ("1.3.2",
//! root = ""), the form every file format in this workspace uses.

mod address;
mod error;
mod plane_tree;
mod ray;

pub use address::UlamAddress;
pub use error::UlamError;
pub use plane_tree::{AddressInterner, PlaneTree};
pub use ray::Ray;

/// Most recent common ancestor of two addresses.
pub fn meet(u: &UlamAddress, v: &UlamAddress) -> UlamAddress {
    u.meet(v)
}

/// Attaches a new rightmost child to `parent` in a copy of the tree,
/// returning the new tree and the new vertex's address.
pub fn plane_tree_attach(
    tree: &PlaneTree,
    parent: &UlamAddress,
) -> Result<(PlaneTree, UlamAddress), UlamError> {
    let mut next = tree.clone();
    let child = next.attach(parent)?;
    Ok((next, child))
}

/// The length-k prefix of a ray, materializing letters as needed.
pub fn ray_truncate(ray: &mut Ray, k: usize) -> UlamAddress {
    ray.truncate(k)
}

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use wonderful::{Ambient, Lattice, ProjectiveMap};

pub fn lattice(q: u64, n: usize) -> Arc<Lattice> {
    Arc::new(Lattice::for_params(q, n).unwrap())
}

/// Random invertible matrices over `ambient`'s field.
pub fn projective_map(ambient: Ambient) -> impl Strategy<Value = ProjectiveMap> {
    let w = ambient.width();
    let q = ambient.q();
    prop::collection::vec(0..q, w * w).prop_filter_map("singular", move |entries| {
        let rows = entries.chunks(w).map(<[u32]>::to_vec).collect();
        ProjectiveMap::new(&ambient, rows).ok()
    })
}

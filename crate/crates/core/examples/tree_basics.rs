//! Horocyclic tree windows: building, heights, downhill flows, links.
//!
//! Run with: cargo run --example tree_basics

use horotree::rat::rat;
use horotree::trees::{build_truncation, HVertex, TreeParams};

fn main() {
    let params = TreeParams::new(2, "p1").unwrap();
    let tree = build_truncation(&params, (0, 4), &HVertex::apartment(0)).unwrap();
    println!(
        "q=2 window [0,4]: {} vertices, {} edges (geometric series 1+2+4+8+16)",
        tree.vertices.len(),
        tree.edges.len()
    );

    // heights scale with the place weight
    let weighted = TreeParams::new(2, "p2").unwrap().with_weight(rat(2));
    let wtree = build_truncation(&weighted, (0, 3), &HVertex::apartment(0)).unwrap();
    let v = HVertex::apartment(3);
    println!(
        "degree-2 place: vertex at level 3 has weighted height {}",
        horotree::rat::format_rat(&wtree.height(&v))
    );

    // the unique descending end: flows from any two vertices merge
    let a = HVertex::new(4, vec![1, 0, 1]);
    let b = HVertex::new(4, vec![0, 1, 1]);
    let fa = tree.downhill_flow(&a, 1).unwrap();
    let fb = tree.downhill_flow(&b, 1).unwrap();
    println!(
        "flows from {:?} and {:?} meet at {:?}",
        (a.level, &a.digits),
        (b.level, &b.digits),
        fa.last().map(|v| (v.level, v.digits.clone()))
    );
    assert_eq!(fa.last(), fb.last());

    // links: one lower neighbor, q upper neighbors
    let mid = HVertex::apartment(2);
    let link = tree.links(&mid).unwrap();
    println!(
        "interior vertex: descending link {} point(s), ascending link {} point(s)",
        link.descending.len(),
        link.ascending.len()
    );

    let dot = tree.to_dot();
    println!("DOT export: {} bytes (pipe to graphviz to draw)", dot.len());

    let doc = tree.to_json_doc();
    println!(
        "JSON adjacency document: {} vertices serialized",
        doc.vertices.len()
    );
}

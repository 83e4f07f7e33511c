//! Root systems, restricted form systems, and exact cone queries.
//!
//! Run with: cargo run --example cones_and_tameness

use horotree::cones::{certificate_sound, conv_m_member, is_m_tame};
use horotree::rat::{format_vec, Rat};
use horotree::root_data::{build_root_system, restricted_negative_system, PlaceSpec, TypeLetter};

fn main() {
    // generate a few root systems and report their sizes
    for (letter, rank) in [
        (TypeLetter::A, 2),
        (TypeLetter::B, 2),
        (TypeLetter::G, 2),
        (TypeLetter::D, 4),
    ] {
        let rs = build_root_system(letter, rank).unwrap();
        println!(
            "{}{}: {} roots, {} negative",
            letter.as_char(),
            rank,
            rs.root_count(),
            rs.negative.len()
        );
    }

    // restrict the negative roots of A2 over three unit places to the
    // kernel of the summed coordinate map
    let rs = build_root_system(TypeLetter::A, 2).unwrap();
    let places: Vec<_> = (0..3).map(|i| PlaceSpec::unit(i, 2)).collect();
    let (restricted, kernel) = restricted_negative_system(&rs, &places).unwrap();
    println!(
        "\nA2 over 3 places: kernel dimension {}, {} restricted forms",
        kernel.dim(),
        restricted.forms.len()
    );
    for f in restricted.forms.iter().take(3) {
        println!(
            "  {} at {} -> {:?}",
            f.tag.root_index,
            f.tag.place,
            format_vec(&f.coeffs)
        );
    }

    // tameness: no small positive combination vanishes
    let forms = restricted.covectors();
    let (tame2, _) = is_m_tame(&forms, 2).unwrap();
    let (tame3, cert) = is_m_tame(&forms, 3).unwrap();
    println!("\n2-tame: {tame2}, 3-tame: {tame3}");
    if let Some(combo) = cert.combination_rats() {
        println!(
            "  vanishing combination uses {} forms across places: {:?}",
            combo.len(),
            combo
                .iter()
                .map(|(i, c)| (
                    restricted.forms[*i].tag.place.clone(),
                    horotree::rat::format_rat(c)
                ))
                .collect::<Vec<_>>()
        );
    }
    assert!(certificate_sound(&cert, &forms, None));

    // cone membership with proof-carrying answers
    let f1 = forms[0].clone();
    let f2 = forms[1].clone();
    let query: Vec<Rat> = f1.iter().zip(&f2).map(|(a, b)| a + b).collect();
    let c1 = conv_m_member(&forms, 1, &query).unwrap();
    let c2 = conv_m_member(&forms, 2, &query).unwrap();
    println!(
        "\nquery f1+f2: member of the 1-fold cone: {}, of the 2-fold cone: {}",
        c1.member, c2.member
    );
    assert!(certificate_sound(&c2, &forms, Some(&query)));
    if let Some(combo) = c2.combination_rats() {
        println!(
            "  reproduced by {:?}",
            combo
                .iter()
                .map(|(i, c)| (i, horotree::rat::format_rat(c)))
                .collect::<Vec<_>>()
        );
    }
}

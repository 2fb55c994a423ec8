//! Built-in construction of the worked-example groups. Everything is checked
//! by closure order at construction, so a bad generator set cannot slip by.

use crate::group::PermGroup;
use crate::perm::Perm;

fn build(degree: usize, gens: &[&str], expected_order: u64) -> PermGroup {
    let gens = gens
        .iter()
        .map(|s| Perm::parse_cycles(degree, s).expect("corpus generator"))
        .collect();
    let g = PermGroup::generate(degree, gens).expect("corpus closure");
    assert_eq!(g.order(), expected_order, "corpus group order");
    g
}

pub fn c2() -> PermGroup {
    build(2, &["(0 1)"], 2)
}

pub fn c3() -> PermGroup {
    build(3, &["(0 1 2)"], 3)
}

pub fn c9() -> PermGroup {
    build(9, &["(0 1 2 3 4 5 6 7 8)"], 9)
}

pub fn klein_four() -> PermGroup {
    build(4, &["(0 1)", "(2 3)"], 4)
}

pub fn c3_times_c3() -> PermGroup {
    build(6, &["(0 1 2)", "(3 4 5)"], 9)
}

pub fn dihedral8() -> PermGroup {
    build(4, &["(0 1 2 3)", "(1 3)"], 8)
}

pub fn quaternion8() -> PermGroup {
    build(8, &["(0 1 2 3)(4 5 6 7)", "(0 4 2 6)(1 7 3 5)"], 8)
}

pub fn sym3() -> PermGroup {
    build(3, &["(0 1 2)", "(0 1)"], 6)
}

pub fn sym4() -> PermGroup {
    build(4, &["(0 1 2 3)", "(0 1)"], 24)
}

pub fn alt4() -> PermGroup {
    build(4, &["(0 1)(2 3)", "(0 1 2)"], 12)
}

pub fn alt5() -> PermGroup {
    build(5, &["(0 1 2 3 4)", "(0 1 2)"], 60)
}

pub fn sym3_times_c3() -> PermGroup {
    build(6, &["(0 1 2)", "(0 1)", "(3 4 5)"], 18)
}

pub fn sym3_times_sym3() -> PermGroup {
    build(6, &["(0 1 2)", "(0 1)", "(3 4 5)", "(3 4)"], 36)
}

pub fn alt4_times_c3() -> PermGroup {
    build(7, &["(0 1)(2 3)", "(0 1 2)", "(4 5 6)"], 36)
}

/// PSL₂(7) ≅ GL₃(𝔽₂) in its 2-transitive action on the seven points of the
/// Fano plane (nonzero vectors of 𝔽₂³, encoded v₀+2v₁+4v₂ − 1).
pub fn psl27() -> PermGroup {
    let matrices: [[[u8; 3]; 3]; 2] = [
        // coordinate rotation
        [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        // transvection e0 ↦ e0, e1 ↦ e0+e1
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
    ];
    let gens: Vec<Perm> = matrices
        .iter()
        .map(|m| {
            let images: Vec<u16> = (1u16..8)
                .map(|v| {
                    let bits = [v & 1, (v >> 1) & 1, (v >> 2) & 1];
                    let mut out = 0u16;
                    for (row, mrow) in m.iter().enumerate() {
                        let mut acc = 0u16;
                        for (col, &coeff) in mrow.iter().enumerate() {
                            acc ^= coeff as u16 * bits[col];
                        }
                        out |= (acc & 1) << row;
                    }
                    out - 1
                })
                .collect();
            Perm::from_images(images).expect("matrix action is a bijection")
        })
        .collect();
    let g = PermGroup::generate(7, gens).expect("GL3(F2) closure");
    assert_eq!(g.order(), 168);
    g
}

/// C₃ ≀ C₃ of order 81 on 9 points: three blocks of 3-cycles plus the block
/// rotation. This is a Sylow 3-subgroup of Σ₉.
pub fn c3_wr_c3() -> PermGroup {
    build(9, &["(0 1 2)", "(3 4 5)", "(6 7 8)", "(0 3 6)(1 4 7)(2 5 8)"], 81)
}

pub fn sym9() -> PermGroup {
    build(9, &["(0 1 2 3 4 5 6 7 8)", "(0 1)"], 362880)
}

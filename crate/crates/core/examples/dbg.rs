use fusionforge_core::corpus;
use fusionforge_core::fusion::FusionSystem;
use fusionforge_core::group::sylow_p_subgroup;

fn main() {
    let g = corpus::sym3();
    let s = sylow_p_subgroup(&g, 3).unwrap();
    let f = FusionSystem::realized(&g, &s, 3).unwrap();
    let s_idx = f.s_index();
    println!("morphism count total = {}", f.morphism_count());
    for idx in 0..f.subgroups().len() {
        println!("subgroup {idx} order {}: hom count {}", f.subgroup(idx).order(), f.hom_to_s(idx).len());
        for m in f.hom_to_s(idx).iter() {
            println!("  key {:?}", m.key);
        }
    }
    let _ = s_idx;
}

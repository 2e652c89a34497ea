use subalc_core::qbf::{eval_qbf, Qbf3Cnf, Quant};
use subalc_core::reductions::qbf_to_tbox;
use subalc_core::tableau::{decide_with, TableauConfig};
use std::time::Instant;

fn main() {
    let phi2 = Qbf3Cnf::new(
        vec![Quant::Forall, Quant::Forall, Quant::Forall],
        vec![[1, -2, 3], [-1, -2, -3]],
    ).unwrap();
    println!("eval_qbf2: {}", eval_qbf(&phi2).unwrap());
    let (inst2, _) = qbf_to_tbox(&phi2).unwrap();
    let t = Instant::now();
    let cfg = TableauConfig { max_nodes: 10_000_000, max_steps: 2_000_000_000 };
    let v2 = decide_with(&inst2, cfg).unwrap();
    println!("decide2: {} in {:?}", v2.is_sat(), t.elapsed());
}

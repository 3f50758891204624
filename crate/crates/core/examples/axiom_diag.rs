// quick diagnostic: coordinate axioms across signatures
use cdo_core::algebroid::{check_axioms, ChartAlgebroid};
use cdo_core::sampler::Sampler;
use cdo_core::superpoly::ChartSignature;

fn main() {
    for (p, q) in [(1usize, 0usize), (2, 0), (0, 2), (1, 1), (2, 1)] {
        let sig = ChartSignature::new(p, q);
        let v = ChartAlgebroid::coordinate(sig);
        let mut s = Sampler::new(99);
        let suite = check_axioms(&v, &mut s, 60, Some(2));
        println!("=== ({p},{q}) all_passed={}", suite.all_passed());
        for c in &suite.checks {
            if !c.passed() {
                println!("{c}");
            }
        }
    }
}

use cdo_core::algebroid::{check_axioms, ChartAlgebroid};
use cdo_core::sampler::Sampler;
use cdo_core::superpoly::ChartSignature;
use std::time::Instant;

fn main() {
    for (p, q) in [(1usize, 0usize), (2, 0), (0, 2), (1, 1), (2, 1)] {
        let sig = ChartSignature::new(p, q);
        let v = ChartAlgebroid::coordinate(sig);
        let mut s = Sampler::new(1);
        let t = Instant::now();
        let suite = check_axioms(&v, &mut s, 200, Some(3));
        println!("({p},{q}): {:?} passed={}", t.elapsed(), suite.all_passed());
    }
}

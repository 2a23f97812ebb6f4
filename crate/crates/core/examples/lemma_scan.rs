//! Prints the order-scaled lemma residuals over the palette grid.
use dowling::{lemma_residuals, SaddleParams};

fn main() {
    for c in 1..=3 {
        for m in 1..=3 {
            for n in [100usize, 1000, 10000] {
                let s = lemma_residuals(SaddleParams::new(c, m).unwrap(), n)
                    .unwrap()
                    .scaled();
                println!(
                    "c={c} m={m} n={n:>5} {:.4} {:.4} {:.4} {:.4}",
                    s[0], s[1], s[2], s[3]
                );
            }
        }
    }
}

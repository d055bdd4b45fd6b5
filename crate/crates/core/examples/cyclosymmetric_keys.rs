//! One- and two-layer cyclosymmetric blocks: orbits, compression and
//! closure under products and inverses.

use csmdpc::cyclosym::{self, is_cyclosymmetric, LayerShape};
use csmdpc::ring::invert;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let small = LayerShape::double(3, 5).unwrap();
    println!("orbits for 3x5:");
    for i in 0..small.compressed_len() {
        let rep = small.representative(i);
        println!("  {rep:>2}: {:?}", small.orbit(rep).as_slice());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for shape in [LayerShape::single(4801).unwrap(), LayerShape::double(61, 79).unwrap()] {
        let h = loop {
            let h = cyclosym::sample_sparse_cyclosymmetric(&shape, 45, &mut rng)
                .unwrap()
                .to_dense();
            if let Ok(inv) = invert(&h) {
                break inv;
            }
        };
        let packed = cyclosym::compress(&h, &shape).unwrap();
        assert_eq!(cyclosym::expand(&packed), h);
        let square = h.mul(&h).unwrap();
        println!(
            "layers {:?}: r={}, inverse weight {}, stored in {} bits ({} bytes), square cyclosymmetric: {}",
            shape.layers(),
            shape.r(),
            h.weight(),
            packed.len(),
            packed.to_bytes().len(),
            is_cyclosymmetric(&square, &shape)
        );
    }
}

//! Key generation, message encryption and decryption at the 80-bit preset.
//!
//!     cargo run --example niederreiter_roundtrip [preset]

use csmdpc::kem::{self, format};
use csmdpc::ParameterSet;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "cs1-80".into());
    let params = ParameterSet::preset(&id)?;
    println!("{params}");

    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let (pk, sk) = kem::keygen(&params, &mut rng)?;
    println!(
        "public key {} bytes, private key {} bytes",
        format::serialize_pk(&pk).len(),
        format::serialize_sk(&sk).len()
    );

    let msg = b"sixteen-byte key and a little more";
    println!("message capacity {} bytes", params.message_capacity() - 2);
    let ct = kem::encrypt_message(&pk, msg)?;
    println!("cryptogram {} bytes", format::serialize_ct(&ct).len());

    let (result, stats) = kem::decrypt_with_stats(&sk, &ct);
    let e = result?;
    let plain = kem::decrypt_message(&sk, &ct)?;
    assert_eq!(plain, msg);
    println!(
        "decrypted {:?}: {} iterations, {} restarts, error weight {}",
        String::from_utf8_lossy(&plain),
        stats.iterations,
        stats.restarts,
        e.weight()
    );
    Ok(())
}

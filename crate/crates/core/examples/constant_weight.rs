//! Constant-weight encoding: integers and byte strings to weight-t words.

use csmdpc::cwe;
use num_bigint::BigUint;

fn main() {
    let (n, t) = (5, 2);
    println!("all weight-{t} words of length {n} in rank order:");
    for m in 0u32..10 {
        let e = cwe::unrank(&BigUint::from(m), n, t).unwrap();
        println!("  {m}: {:?}", e.sorted_coords());
    }

    let (n, t) = (9602, 84);
    println!(
        "n={n} t={t}: lg C(n,t) = {:.2}, message capacity {} bytes",
        cwe::log2_big(&cwe::binomial(n, t)),
        cwe::message_capacity(n, t)
    );
    let msg = b"constant weight";
    let m = cwe::encode_message(msg, n, t).unwrap();
    let e = cwe::unrank(&m, n, t).unwrap();
    println!(
        "message -> {} error positions, first {:?}",
        e.weight(),
        &e.sorted_coords()[..5]
    );
    let back = cwe::decode_message(&cwe::rank(&e, t).unwrap(), n, t).unwrap();
    assert_eq!(back, msg);
    println!("recovered {:?}", String::from_utf8_lossy(&back));
}

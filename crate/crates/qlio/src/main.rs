use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use statrs::distribution::{ContinuousCDF, Normal};

fn main() {
    println!("fmt: {:.4e} | {:.4e} | {:.4e}", 0.00013447_f64, 0.0_f64, -1234.567_f64);
    println!(
        "exp1==E: {}",
        (1.0_f64).exp().to_bits() == std::f64::consts::E.to_bits()
    );
    let n = 10.0_f64;
    let rms = (0.0_f64 / n).sqrt();
    let mc = (0..10).map(|_| (0.0_f64).cos()).sum::<f64>() / n;
    let f = 20.0 * (1.0 - (-0.02 * rms).exp()) + (std::f64::consts::E - mc.exp());
    println!("ackley origin: {:e}", f);
    let mut r1 = ChaCha8Rng::seed_from_u64(42);
    r1.set_stream(0);
    let mut r2 = ChaCha8Rng::seed_from_u64(42);
    r2.set_stream(1);
    let a: f64 = r1.random();
    let b: f64 = r2.random();
    println!("chacha s0={a} s1={b} range={}", r1.random_range(1.0..=5.0));
    let mut h = Sha256::new();
    h.update(42u64.to_le_bytes());
    h.update(b"sphere");
    let d = h.finalize();
    println!("sha ok: {}", u64::from_le_bytes(d[..8].try_into().unwrap()));
    let norm = Normal::new(0.0, 1.0).unwrap();
    println!("phi(-1.96)={}", norm.cdf(-1.96));
    println!("4^0.5 sqrt: {}", 4.0_f64.sqrt());
    println!("clamp: {}", (10.000000000000002_f64).clamp(-10.0, 10.0));
}

#![allow(dead_code)]

pub mod checks;

use qbound::analysis::CwsCode;
use qbound::codefile::{read_code_file, CodeFile};
use qbound::pauli::{PauliGroup, PauliOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/codes").join(name)
}

pub fn bundled(name: &str) -> CodeFile {
    read_code_file(data_path(name)).unwrap()
}

pub fn bundled_cws(name: &str) -> CwsCode {
    bundled(name).cws().unwrap().clone()
}

fn random_pauli(rng: &mut ChaCha8Rng, m: usize) -> PauliOperator {
    let mask = (1u64 << m) - 1;
    PauliOperator::from_bits(m, rng.gen::<u64>() & mask, rng.gen::<u64>() & mask)
}

/// A random maximal stabilizer group on `m` qubits, grown greedily.
pub fn random_stabilizer(rng: &mut ChaCha8Rng, m: usize) -> PauliGroup {
    let mut gens: Vec<PauliOperator> = Vec::new();
    while gens.len() < m {
        let p = random_pauli(rng, m);
        if p.is_identity_up_to_phase() || !gens.iter().all(|g| g.commutes(&p).unwrap()) {
            continue;
        }
        let mut trial = gens.clone();
        trial.push(p);
        if let Ok(g) = PauliGroup::close(m, &trial, true) {
            if g.rank() == trial.len() {
                gens = trial;
            }
        }
    }
    PauliGroup::close(m, &gens, true).unwrap()
}

/// A random CWS code: random maximal group on `n + c` qubits and the words
/// generated by up to `max_k` random commuting Paulis on the sender qubits.
pub fn random_cws(seed: u64, n: usize, c: usize, max_k: usize) -> CwsCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let s = random_stabilizer(&mut rng, n + c);
        let k = rng.gen_range(0..=max_k);
        let mut gens: Vec<PauliOperator> = Vec::new();
        for _ in 0..20 {
            if gens.len() == k {
                break;
            }
            let p = random_pauli(&mut rng, n);
            if gens.iter().all(|g| g.commutes(&p).unwrap()) {
                gens.push(p);
            }
        }
        let mut words = vec![PauliOperator::identity(n)];
        for g in &gens {
            let more: Vec<PauliOperator> = words.iter().map(|w| w.mul(g).unwrap().stripped()).collect();
            words.extend(more);
        }
        if let Ok(code) = CwsCode::new(n, c, s, words) {
            return code;
        }
    }
}

/// A random subgroup of the Pauli group on `m` qubits, not necessarily abelian.
pub fn random_group(seed: u64, m: usize, gens: usize) -> PauliGroup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<PauliOperator> = (0..gens).map(|_| random_pauli(&mut rng, m)).collect();
    PauliGroup::close(m, &g, false).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

//! Fixtures shared by the criterion benches.

use qlmc::{derive_params, Molecule, MorseState, QParam, QhoState};

pub fn qho(n: u32, q: f64) -> QhoState {
    QhoState::new(n, QParam::new(q).unwrap()).unwrap()
}

pub fn morse(mol: &Molecule, n: u32, q: f64) -> MorseState {
    MorseState::new(derive_params(mol, QParam::new(q).unwrap()).unwrap(), n).unwrap()
}

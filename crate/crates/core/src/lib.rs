pub mod contextual;
pub mod deciders;
pub mod gpt;
pub mod nonlocal;
pub mod numerics;
pub mod orthograph;
pub mod quantum;
pub mod verdict;
pub mod zoo;

//! Concrete models: classical simplices, the square bit, regular polygons,
//! the PR box, CHSH, and the pentagon test space.

mod models;
mod systems;

pub use models::{
    chsh_deterministic_strategies, chsh_game, kcbs_model, odd_polygon_overflow, pentagon_half_weight,
    pentagon_hypergraph, pr_box, tsirelson_behavior, OverflowWitness,
};

pub use systems::{
    classical_system, polygon_is_exact, polygon_r_squared, polygon_system, polygon_system_with_precision, square_bit,
    ZooError,
};

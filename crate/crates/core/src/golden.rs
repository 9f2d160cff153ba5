//! Small fixed instances with known answers, embedded so demos run offline.

use crate::instance::{path_instance, Chore, Instance};
use crate::valuation::Valuations;

fn identical_path(values: &[i64]) -> Instance {
    path_instance(vec![values.to_vec(); 2]).expect("golden instance is well formed")
}

/// Values (-1, -1, -1, -4) on a 4-path: no schedule is both EFX and maximal.
pub fn efx_maximal() -> Instance {
    identical_path(&[-1, -1, -1, -4])
}

/// Values (-2, -10, -1, -10, -2) on a 5-path: no schedule is both EF1 and
/// Pareto optimal.
pub fn ef1_po() -> Instance {
    identical_path(&[-2, -10, -1, -10, -2])
}

/// Values (-1, -3, -1, -3) on a 4-path: no complete schedule is EF1.
pub fn ef1_complete() -> Instance {
    identical_path(&[-1, -3, -1, -3])
}

/// Eight chores on a path where round robin (first agent first) ends up
/// violating EF1.
pub fn round_robin() -> Instance {
    identical_path(&[0, -7, -2, -1, -3, -8, -9, -10])
}

/// Five chores on a path where sink-picking envy-cycle elimination ends up
/// violating EF1.
pub fn envy_cycle() -> Instance {
    identical_path(&[-10, -1, -10, -3, -2])
}

/// One long chore overlapping three short consecutive ones.
pub fn star() -> Instance {
    Instance::new(
        2,
        vec![
            Chore::new(0, 0, 3),
            Chore::new(1, 0, 1),
            Chore::new(2, 1, 2),
            Chore::new(3, 2, 3),
        ],
        Valuations::Additive(vec![vec![-1; 4]; 2]),
    )
    .expect("golden instance is well formed")
}

/// Looks up a golden instance by its demo name.
pub fn by_name(name: &str) -> Option<Instance> {
    Some(match name {
        "efx-maximal" => efx_maximal(),
        "ef1-po" => ef1_po(),
        "ef1-complete" => ef1_complete(),
        "round-robin" => round_robin(),
        "envy-cycle" => envy_cycle(),
        "star" => star(),
        _ => return None,
    })
}

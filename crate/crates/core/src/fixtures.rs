//! Reference matrices used across tests, `verify` and the acceptance suite.

use nalgebra::Vector3;

use crate::channel::UnitalChannel;
use crate::numerics::{mat3_from_rows, RealMat3};

fn unital(t: RealMat3) -> UnitalChannel {
    UnitalChannel::new(t).expect("fixture is contractive")
}

/// `Λ = diag(0.73, 0.5, 0.5)`.
pub fn lambda_example() -> UnitalChannel {
    unital(RealMat3::from_diagonal(&Vector3::new(0.73, 0.5, 0.5)))
}

/// Swap of the first two Bloch axes (determinant -1).
pub fn o_swap() -> UnitalChannel {
    unital(mat3_from_rows([
        [0.0, 1.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0],
    ]))
}

/// `T = O Λ`.
pub fn t_newt() -> UnitalChannel {
    unital(o_swap().t() * lambda_example().t())
}

/// `(T + Tᵀ)/2` for the EB² witness.
pub fn t_bar() -> UnitalChannel {
    let t = t_newt();
    unital((t.t() + t.t().transpose()) * 0.5)
}

/// `Λ = diag(0.91, 0.6, 0.55)` of the EB³ witness.
pub fn lambda_eb3() -> UnitalChannel {
    unital(RealMat3::from_diagonal(&Vector3::new(0.91, 0.6, 0.55)))
}

/// `T = O Λ` of the EB³ witness.
pub fn t_eb3() -> UnitalChannel {
    unital(o_swap().t() * lambda_eb3().t())
}

/// `(T + Tᵀ)/2` of the EB³ witness.
pub fn t_bar_eb3() -> UnitalChannel {
    let t = t_eb3();
    unital((t.t() + t.t().transpose()) * 0.5)
}

//! Group pairs with decidable normal forms.

pub mod ball;
pub mod peripheral;
pub mod spec;
mod surface;
pub mod word;

pub use ball::{cayley_ball, cayley_ball_capped, CayleyBall};
pub use peripheral::{
    induced_peripheral, peripheral_cosets, CosetTable, CosetTrace, InducedPeripheral, Peripheral, PeripheralModel,
    PeripheralSpec, Shape,
};
pub use spec::{Factor, GroupKind, GroupSpec};
pub use word::{Letter, Word};

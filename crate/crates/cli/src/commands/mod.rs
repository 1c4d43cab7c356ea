pub mod check;
pub mod evaluate;
pub mod gen;
pub mod surface;
pub mod sweep;

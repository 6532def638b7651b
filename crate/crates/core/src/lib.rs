pub mod classes;
pub mod measures;
pub mod numerics;
pub mod specfun;
pub mod verify;

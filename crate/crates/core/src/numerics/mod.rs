//! Small numerical building blocks: bracketed roots, polynomial roots,
//! adaptive quadrature and an embedded Runge-Kutta integrator.

pub mod ode;
pub mod poly;
pub mod quadrature;
pub mod roots;

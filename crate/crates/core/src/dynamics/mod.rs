//! Direct integration of the spherical pendulum on T*S² in redundant coordinates, rotation
//! numbers from trajectories, periodic orbits and their geometry in stereographic projection.

mod integrator;
mod orbit;
mod state;

pub use integrator::{dopri_step, Dopri};
pub use orbit::{
    geometry_report, integrate, j2_max, periodic_orbit_search, periodic_orbits_at_energy, rotation_number_by_integration,
    GeometryReport, OrbitRecord, OrbitSample, PeriodicOrbit,
};
pub use state::{cross, dot, vector_field, PhaseState, Vec3};

#[cfg(test)]
mod tests;

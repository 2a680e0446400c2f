//! Intersection bounds (under construction).

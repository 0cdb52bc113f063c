"""Iterated centroid-chord map on inscribed simplices and cyclic quadrilaterals."""

"""
Unit tests for surface presets and cutting
Tests classification, serialization and cut signatures
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from core.complexes import validate_cut_system
from core.curves import curve_from_word, preset, standard_curves, torus_curve
from core.surface_core import (
    Surface,
    SurfaceError,
    annulus_surface,
    build_surface,
    classify,
    cut_along,
    cut_along_system,
)


class TestPresets:
    """Test preset construction and classification."""

    @pytest.mark.parametrize("genus,boundary", [(1, 0), (1, 1), (1, 2), (2, 0), (3, 0)])
    def test_classification_matches_request(self, genus, boundary):
        """Every preset classifies as the requested connected surface."""
        s = build_surface(genus, boundary)
        assert classify(s) == (genus, boundary, 1)
        assert s.euler_characteristic == 2 - 2 * genus - boundary

    def test_genus_zero_rejected(self):
        """Genus zero is not a supported preset."""
        with pytest.raises(SurfaceError, match="positive genus"):
            build_surface(0, 2)

    def test_negative_boundary_rejected(self):
        with pytest.raises(SurfaceError):
            build_surface(1, -1)

    def test_closed_flag(self):
        assert build_surface(2, 0).is_closed
        assert not build_surface(1, 1).is_closed

    def test_key_names_signature(self):
        """Keys carry genus, boundary and a hash prefix."""
        s = build_surface(2, 0)
        assert s.key.startswith("S2.0:")
        assert s.surface_hash[:16] in s.key

    def test_hash_is_stable(self):
        assert build_surface(1, 1).surface_hash == build_surface(1, 1).surface_hash
        assert build_surface(1, 1).surface_hash != build_surface(1, 2).surface_hash

    def test_serialization_round_trip(self):
        """from_dict rebuilds an equal surface."""
        s = build_surface(1, 2)
        again = Surface.from_dict(s.to_dict())
        assert again == s
        assert again.surface_hash == s.surface_hash

    def test_annulus(self):
        assert classify(annulus_surface()) == (0, 2, 1)


class TestCutting:
    """Test cutting along curves and cut systems."""

    def test_torus_cut_is_annulus(self):
        """Cutting the torus along (1,0) leaves an annulus."""
        s = preset(1, 0)
        nbhd = cut_along(s, torus_curve(s, 1, 0))
        assert classify(nbhd.complement) == (0, 2, 1)
        assert nbhd.reglued_signature() == (1, 0, 1)

    def test_boundary_pair_is_two_copies(self):
        s = preset(1, 0)
        nbhd = cut_along(s, torus_curve(s, 2, 1))
        right, left = nbhd.boundary_pair
        assert right and left
        assert not set(right) & set(left)

    def test_separating_cut_has_two_pieces(self):
        """The genus-2 waist cuts into two one-holed tori."""
        s = preset(2, 0)
        waist = curve_from_word(s, [1, 0, 3, 2])
        nbhd = cut_along(s, waist)
        assert classify(nbhd.complement) == (2, 2, 2)

    def test_cut_system_leaves_sphere(self):
        """Cutting along <a1, a2> gives a four-holed sphere."""
        s = preset(2, 0)
        std = standard_curves(s)
        cut = cut_along_system(s, validate_cut_system(s, [std["a1"], std["a2"]]))
        assert classify(cut) == (0, 4, 1)


if __name__ == '__main__':
    import pytest
    pytest.main([__file__, '-v'])

"""Independent brute-force oracles used to freeze expected values.

Everything here works by explicit 2-D ray construction: place points and
image/screen positions, intersect lines, measure angles.  No formula from
the package under test is reused.
"""

from __future__ import annotations

import math

DIVERGENT = "divergent"


def _intersect(p1, d1, p2, d2):
    """Intersection of p1 + t*d1 and p2 + s*d2; returns (x, y, t) or None."""
    det = d1[0] * d2[1] - d2[0] * d1[1]
    if det == 0.0:
        return None
    rx = p2[0] - p1[0]
    ry = p2[1] - p1[1]
    t = (rx * d2[1] - d2[0] * ry) / det
    return (p1[0] + t * d1[0], p1[1] + t * d1[1], t)


def ray_disparity(b, H, W, z, x=0.3):
    """Disparity (fraction of W) of a point at depth z, by projecting it
    through both optical centers onto the convergence plane."""
    if z == math.inf:
        # Rays to a point at infinity are parallel; each image point sits
        # directly above its camera.
        m_left = -b / 2.0
        m_right = b / 2.0
    else:
        cam_left = -b / 2.0
        cam_right = b / 2.0
        m_left = cam_left + (x - cam_left) * (H / z)
        m_right = cam_right + (x - cam_right) * (H / z)
    return (m_right - m_left) / W


def ray_perceived(b, H, W, display_disparity, x0=0.17):
    """Perceived depth for a displayed disparity: intersect the two gaze
    rays from the eyes through their screen points."""
    p = display_disparity * W
    eye_left = (-b / 2.0, 0.0)
    eye_right = (b / 2.0, 0.0)
    screen_left = (x0 - p / 2.0, H)
    screen_right = (x0 + p / 2.0, H)
    d_left = (screen_left[0] - eye_left[0], screen_left[1] - eye_left[1])
    d_right = (screen_right[0] - eye_right[0], screen_right[1] - eye_right[1])
    hit = _intersect(eye_left, d_left, eye_right, d_right)
    if hit is None:
        return math.inf
    _, y, t = hit
    if t <= 0.0:
        return DIVERGENT
    return y


def ray_map(shoot, view, shift, z):
    """Scene depth to perceived depth by composing the two ray steps.

    ``shoot`` and ``view`` are (b, H, W) triples.
    """
    d = ray_disparity(*shoot, z)
    return ray_perceived(*view, d + shift)


def gaze_vergence_deg(b, H, W, display_disparity, x0=0.0):
    """Vergence angle between the two gaze vectors, degrees, positive when
    converging; measured with explicit direction vectors."""
    p = display_disparity * W
    eye_left = (-b / 2.0, 0.0)
    eye_right = (b / 2.0, 0.0)
    screen_left = (x0 - p / 2.0, H)
    screen_right = (x0 + p / 2.0, H)
    angle_left = math.atan2(screen_left[0] - eye_left[0], screen_left[1] - eye_left[1])
    angle_right = math.atan2(screen_right[0] - eye_right[0], screen_right[1] - eye_right[1])
    return math.degrees(angle_left - angle_right)


def gaze_angular_disparity_deg(b, H, W, display_disparity):
    """Vergence offset relative to looking at the screen plane."""
    return gaze_vergence_deg(b, H, W, display_disparity) - gaze_vergence_deg(b, H, W, 0.0)


def cross_ratio(z1, z2, z3, z4):
    return ((z1 - z3) * (z2 - z4)) / ((z2 - z3) * (z1 - z4))


def finite_difference(fn, x, h):
    return (fn(x + h) - fn(x - h)) / (2.0 * h)

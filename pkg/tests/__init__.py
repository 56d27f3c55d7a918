"""Tests for coprimatch; the checkout root goes on sys.path so an uninstalled tree imports."""

import os
import sys

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

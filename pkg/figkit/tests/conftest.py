import pytest

pytest.importorskip("figkit")

import random

import pytest

from stdt import container, verify
from stdt.errors import FormatError
from stdt.succinct import build
from stdt.tree import OrderedTree, random_tree

CASES = [
    ("uniform", 3000, {}),
    ("path", 1, {}),
    ("uniform", 2, {}),
    ("skewed:0.9", 500, dict(L=8, B=3)),
    ("full-binary", 63, dict(L=4, B=24, backend="enum")),
]


@pytest.mark.parametrize("prof,n,kw", CASES)
def test_deterministic_and_roundtrip(tmp_path, prof, n, kw):
    t = random_tree(n, prof, 3)
    a = container.dumps(build(t, **kw))
    assert a == container.dumps(build(t, **kw))
    path = tmp_path / "x.stdt"
    path.write_bytes(a)
    back = container.read(str(path))
    assert container.dumps(back) == a
    assert verify.oracle_sweep(back, t, random.Random(n)).ok


def test_single_node_has_no_payload():
    data = container.dumps(build(OrderedTree([0])))
    assert container.loads(data).space_report()["payload_bits"] == 0


@pytest.fixture
def image():
    return container.dumps(build(random_tree(800, "uniform", 1)))


def test_bad_magic(image):
    with pytest.raises(FormatError):
        container.loads(b"XXXX" + image[4:])


def test_bad_version(image):
    with pytest.raises(FormatError):
        container.loads(image[:4] + b"\x07" + image[5:])


def test_truncated(image):
    for cut in (3, 10, len(image) // 2, len(image) - 1):
        with pytest.raises(FormatError):
            container.loads(image[:cut])


def test_trailing_bytes(image):
    with pytest.raises(FormatError):
        container.loads(image + b"\0")


def test_header_layout(image):
    assert image[:4] == b"STDT"
    assert image[4] == 1
    assert image[5] == 1  # arith flag
    assert int.from_bytes(image[6:14], "little") == 800

import zlib
from hashlib import sha256
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import VECTOR_DIR
from reference import crc32_reference, sha_merkle_reference
from txilm.merkle import crc_merkle_root, sha_merkle_root
from txilm.types import Txid


def _txids(count, tag=b"mk"):
    return [Txid(sha256(tag + i.to_bytes(4, "big")).digest()) for i in range(count)]


def test_single_leaf_is_identity():
    (t,) = _txids(1)
    assert sha_merkle_root([t]) == bytes(t)
    assert crc_merkle_root([t]) == zlib.crc32(t).to_bytes(4, "big")


def test_two_leaves():
    t1, t2 = _txids(2)
    assert sha_merkle_root([t1, t2]) == sha256(t1 + t2).digest()
    c1 = zlib.crc32(t1).to_bytes(4, "big")
    c2 = zlib.crc32(t2).to_bytes(4, "big")
    assert crc_merkle_root([t1, t2]) == zlib.crc32(c1 + c2).to_bytes(4, "big")


def test_three_leaves_duplicates_last():
    t1, t2, t3 = _txids(3)
    want = sha256(sha256(t1 + t2).digest() + sha256(t3 + t3).digest()).digest()
    assert sha_merkle_root([t1, t2, t3]) == want


def test_empty_list_rejected():
    with pytest.raises(ValueError):
        sha_merkle_root([])
    with pytest.raises(ValueError):
        crc_merkle_root([])


def test_crc32_is_the_standard_parametrization():
    assert zlib.crc32(b"123456789") == 0xCBF43926
    for data in (b"", b"a", b"golden", bytes(range(64))):
        assert zlib.crc32(data) == crc32_reference(data)


def test_golden_vector_file():
    lines = (VECTOR_DIR / "merkle_vectors.tsv").read_text().splitlines()
    assert lines[0] == "txid_list_hex\tsha_root_hex\tcrc_root_hex"
    for line in lines[1:]:
        joined, sha_hex, crc_hex = line.split("\t")
        txids = [Txid.from_hex(h) for h in joined.split(",")]
        assert sha_merkle_root(txids).hex() == sha_hex
        assert crc_merkle_root(txids).hex() == crc_hex


def test_four_leaf_permutation_sensitivity():
    txids = _txids(4)
    base_sha = sha_merkle_root(txids)
    base_crc = crc_merkle_root(txids)
    sha_changed = 0
    crc_changed = 0
    for perm in permutations(txids):
        if list(perm) == txids:
            continue
        if sha_merkle_root(list(perm)) != base_sha:
            sha_changed += 1
        if crc_merkle_root(list(perm)) != base_crc:
            crc_changed += 1
    assert sha_changed == 23  # every non-identity permutation moves the root
    assert crc_changed >= 1


@given(st.lists(st.integers(min_value=0, max_value=2**32 - 1), min_size=1, max_size=40))
def test_matches_recursive_reference(tags):
    txids = [Txid(sha256(t.to_bytes(4, "big")).digest()) for t in tags]
    assert sha_merkle_root(txids) == sha_merkle_reference([bytes(t) for t in txids])


@given(
    st.lists(st.integers(min_value=0, max_value=2**32 - 1), min_size=2, max_size=20, unique=True),
    st.data(),
)
def test_swapping_two_leaves_changes_sha_root(tags, data):
    txids = [Txid(sha256(t.to_bytes(4, "big")).digest()) for t in tags]
    i = data.draw(st.integers(min_value=0, max_value=len(txids) - 2))
    j = data.draw(st.integers(min_value=i + 1, max_value=len(txids) - 1))
    swapped = list(txids)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert sha_merkle_root(swapped) != sha_merkle_root(txids)

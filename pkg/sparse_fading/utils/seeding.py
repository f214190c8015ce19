import hashlib
import random
import struct

import numpy as np
import torch as T


def seed_everything(seed: int, deterministic=False):
    """
    Puts all seeds for reproducibility
    Args:
        seed: the selected seed
        deterministic: restrict torch to one thread so reductions are
        summed in a fixed order
    """
    T.manual_seed(seed)
    if deterministic:
        T.set_num_threads(1)

    np.random.seed(seed % 2 ** 32)
    random.seed(seed)


def derive_seed(master_seed: int, *coordinates) -> int:
    """
    Seed of one work item, a function of the master seed and the item's grid
    coordinates only, so results do not depend on iteration order
    Args:
        master_seed: seed of the whole run
        *coordinates: grid coordinates and trial index of the work item

    Returns: non negative 63 bit integer

    """
    digest = hashlib.blake2b(digest_size=8)
    digest.update(struct.pack('<Q', master_seed % 2 ** 64))
    for coordinate in coordinates:
        digest.update(b'|')
        digest.update(canonical_token(coordinate))

    return struct.unpack('<Q', digest.digest())[0] >> 1


def canonical_token(value) -> bytes:
    # floats are hashed by their repr so 0.1 and 0.1000 agree
    if isinstance(value, float):
        return repr(float(value)).encode()
    return str(value).encode()


def make_generator(seed: int) -> T.Generator:
    generator = T.Generator(device='cpu')
    generator.manual_seed(seed)
    return generator

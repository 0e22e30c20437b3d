import os


def makedirs(main_dir, sub_dirs=None):
    """Create ``main_dir`` and the given sub-directories under it.

    Returns a dict mapping each sub-directory name to its path.
    """
    os.makedirs(main_dir, exist_ok=True)
    filepaths = dict()
    for sub_dir in sub_dirs or []:
        path = os.path.join(main_dir, sub_dir)
        filepaths[sub_dir] = path
        # Several consumers may race here.
        os.makedirs(path, exist_ok=True)
    return filepaths


def derive_seed(seed, index):
    """Seed of work unit ``index``; independent of the worker count."""
    return int(seed) ^ int(index)


def ceil_log2(n):
    return max(1, (int(n) - 1).bit_length())


def as_list(value):
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]

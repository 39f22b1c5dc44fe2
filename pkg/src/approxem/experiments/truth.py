"""Ground-truth parameters named in configs."""
from approxem.errors import InvalidConfig, UnknownFamily
from approxem.experiments.families import make_family
from approxem.models.betagauss import BetaGaussParams1D, BetaGaussParams2D
from approxem.models.io import read_params


def bg_params_from_values(model, values):
    cls = BetaGaussParams1D if model == "bg1d" else BetaGaussParams2D
    vals = []
    for name in cls.names():
        if name in values:
            vals.append(float(values[name]))
        else:
            alt = name.replace("sigma2", "sigma")
            if alt == name or alt not in values:
                raise InvalidConfig(f"missing parameter {name!r}")
            vals.append(float(values[alt]) ** 2)
    try:
        return cls.from_flat(vals).validate()
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from exc


def resolve_truth(model, truth):
    """Parameter object described by a ``truth`` mapping."""
    if "file" in truth:
        return read_params(truth["file"])
    if model == "gmm":
        try:
            return make_family(truth.get("family", 1))
        except UnknownFamily as exc:
            raise InvalidConfig(str(exc)) from exc
    return bg_params_from_values(model, truth)

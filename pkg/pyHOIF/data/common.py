"""
Dataset files and discrete model files
"""

import json

import numpy as np
import pandas as pd

from pyHOIF.basis.Atoms import AtomBasis
from pyHOIF.common.Exceptions import ConfigurationError, DataError
from pyHOIF.common.Observation import Dataset
from pyHOIF.models import get_kind
from pyHOIF.models.discrete import DiscreteModel


HEADER_CONVENTION = "missing data convention: y1 = Y*A (0 when the outcome is missing)"


def _header(kind, discrete):
    return "# pyHOIF dataset kind={} discrete={}; {}\n".format(kind, int(discrete), HEADER_CONVENTION)


def _parse_header(line):
    info = {}
    for token in line.lstrip('#').split(';')[0].split():
        if '=' in token:
            key, value = token.split('=', 1)
            info[key] = value
    return info


def write_dataset(data, filename, kind=''):
    """
    Write a sample as delimited text with the header y1,y2,a,z1..zd, preceded by a comment line
    with the model kind and the missing data convention
    :param data: Dataset
    :param filename: file name
    :param kind: model kind tag written in the comment line
    """
    with open(filename, 'w', newline='') as file:
        file.write(_header(kind, data.discrete))
        data.to_dataframe().to_csv(file, index=False, float_format='%.17g')


def read_dataset(filename, discrete=None):
    """
    Read a sample written by write_dataset (the comment line is optional)
    :param filename: file name
    :param discrete: True if z1 holds discrete support indexes; read from the comment line when None
    :return: tuple (Dataset, header dict)
    """
    with open(filename, 'r') as file:
        first = file.readline()
    info = _parse_header(first) if first.startswith('#') else {}
    if discrete is None:
        discrete = info.get('discrete', '0') == '1'
    try:
        df = pd.read_csv(filename, comment='#')
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as ex:
        raise DataError("Malformed dataset file {}: {}".format(filename, ex))
    return Dataset.from_dataframe(df, discrete=discrete), info


def _qualified(where, key):
    return "{}.{}".format(where, key) if where else key


def check_fields(spec, allowed, where=''):
    """
    Reject anything but a JSON object whose keys are all in allowed
    :param where: dotted path of the object, used to name the offending field
    """
    if not isinstance(spec, dict):
        raise ConfigurationError("Field '{}' must be an object".format(where), field=where or None)
    unknown = sorted(set(spec) - set(allowed))
    if unknown:
        field = _qualified(where, unknown[0])
        raise ConfigurationError("Unknown field '{}'".format(field), field=field)


def _field(spec, key, required=True, where=''):
    if key not in spec:
        if required:
            field = _qualified(where, key)
            raise ConfigurationError("Missing field '{}'".format(field), field=field)
        return None
    return spec[key]


def _vector(spec, key, J=None, required=True, where=''):
    value = _field(spec, key, required, where)
    if value is None:
        return None
    field = _qualified(where, key)
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigurationError("Field '{}' must be a list of numbers".format(field), field=field)
    if arr.ndim == 0 or (J is not None and arr.shape[-1] != J):
        raise ConfigurationError("Field '{}' must have one value per atom ({})".format(field, J), field=field)
    return arr


MODEL_FIELDS = ('kind', 'f', 'a', 'b', 'c', 'propensity')
FIT_FIELDS = ('a_hat', 'b_hat', 'f_hat')
BASIS_FIELDS = {'indicator': ('type', 'k'), 'constant': ('type',), 'matrix': ('type', 'values')}


def discrete_model_from_dict(spec, where='model'):
    """
    Build a DiscreteModel from a dict with the keys kind, f, a, b and optionally c and propensity
    :param where: name of the object in the enclosing file, used in error messages
    """
    check_fields(spec, MODEL_FIELDS, where)
    kind_args = {}
    if 'propensity' in spec:
        kind_args['propensity'] = spec['propensity']
    kind = get_kind(_field(spec, 'kind', where=where), **kind_args)
    f = _vector(spec, 'f', where=where)
    J = len(f)
    return DiscreteModel(f, _vector(spec, 'a', J, where=where), _vector(spec, 'b', J, where=where), kind,
                         c=_vector(spec, 'c', J, False, where=where))


def fit_from_dict(spec, J, where='fit'):
    """Fixed fit values {"a_hat": [...], "b_hat": [...], "f_hat": [...]} on J atoms, f_hat optional"""
    check_fields(spec, FIT_FIELDS, where)
    return {'a_hat': _vector(spec, 'a_hat', J, where=where), 'b_hat': _vector(spec, 'b_hat', J, where=where),
            'f_hat': _vector(spec, 'f_hat', J, False, where=where)}


def basis_from_dict(spec, J, where='basis'):
    """
    Truncation basis on J atoms: {"type": "indicator", "k": k}, {"type": "constant"} or
    {"type": "matrix", "values": J x k list}
    """
    check_fields(spec, ('type', 'k', 'values'), where)
    btype = spec.get('type', 'indicator')
    if btype not in BASIS_FIELDS:
        raise ConfigurationError("Unknown basis type '{}'".format(btype), field=_qualified(where, 'type'))
    check_fields(spec, BASIS_FIELDS[btype], where)
    if btype == 'indicator':
        k = spec.get('k', J)
        if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k <= J:
            raise ConfigurationError("Field '{}' must be an integer in 0..{}".format(_qualified(where, 'k'), J),
                                     field=_qualified(where, 'k'))
        return AtomBasis.indicator(J, k)
    if btype == 'constant':
        return AtomBasis.constant(J)
    return AtomBasis(_vector(spec, 'values', where=where))


def load_oracle_file(filename):
    """
    Read a JSON file describing a discrete model, a fixed fit and optionally a truncation basis:

        {"model": {"kind": "missing", "f": [...], "a": [...], "b": [...]},
         "fit": {"a_hat": [...], "b_hat": [...], "f_hat": [...]},
         "basis": {"type": "constant"}}

    :return: tuple (DiscreteModel, fit dict of arrays, basis or None)
    """
    try:
        with open(filename, 'r') as file:
            spec = json.load(file)
    except json.JSONDecodeError as ex:
        raise ConfigurationError("Malformed model file {}: {}".format(filename, ex))
    if not isinstance(spec, dict):
        raise ConfigurationError("The model file must hold a JSON object")
    check_fields(spec, ('model', 'fit', 'basis'))
    dmodel = discrete_model_from_dict(_field(spec, 'model'))
    fit = fit_from_dict(_field(spec, 'fit'), dmodel.J)
    basis = basis_from_dict(spec['basis'], dmodel.J) if 'basis' in spec else None
    return dmodel, fit, basis

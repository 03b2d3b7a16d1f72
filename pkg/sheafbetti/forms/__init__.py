from sheafbetti.forms.run_forms import CHECK_NAMES, RunConfig, RunConfigForm

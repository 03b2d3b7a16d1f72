from flask.cli import ScriptInfo

from sheafbetti import create_app

app = create_app()

if __name__ == '__main__':
    # python run.py compute --dmax 6 behaves like flask --app run compute --dmax 6
    app.cli.main(prog_name='sheafbetti', obj=ScriptInfo(create_app=lambda: app))

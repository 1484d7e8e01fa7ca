"""mpmath cross-check of every corpus identity at its default parameters.

Prints the relative gap between the two sides for each check; all gaps
should sit near 1e-40 at 50 digits. Run with `python3 corpus_oracle.py`.
"""
import mpmath as mp
mp.mp.dps = 50
def poch(a,q,n):
    if n<0: return 1/mp.fprod([1-a*q**(-k) for k in range(1,-n+1)])
    r=mp.mpf(1)
    for i in range(n): r*=(1-a*q**i)
    return r
def pinf(a,q):
    r=mp.mpf(1);k=0
    while abs(a*q**k)>mp.mpf(10)**-45: r*=1-a*q**k;k+=1
    return r
def P(*a, q, n=None):
    r=1
    for x in a: r*= pinf(x,q) if n is None else poch(x,q,n)
    return r
def qbin(n,k,q):
    if k<0 or k>n: return 0
    return poch(q,q,n)/(poch(q,q,k)*poch(q,q,n-k))
C2=lambda n:n*(n-1)//2
def phi(up,lo,q,z,N=400):
    r,s=len(up),len(lo); tot=0
    for n in range(N):
        t=P(*up,q=q,n=n)/P(q,*lo,q=q,n=n)*((-1)**n*q**C2(n))**(1+s-r)*z**n
        tot+=t
        if t==0 and n>0: break
    return tot
def rep(name,l,r): print(f'{name:40s} {mp.nstr(abs(l-r)/abs(r),3)}')
q=mp.mpf('0.5')
a,z=mp.mpf('0.7'),mp.mpf('0.25')
rep('q-binomial', phi([a],[],q,z), pinf(a*z,q)/pinf(z,q))
n,x=12,mp.mpf('0.3')
rep('finite-q-binomial product', sum((-1)**k*q**C2(k)*qbin(n,k,q)*x**k for k in range(n+1)), poch(x,q,n))
rep('finite-q-binomial inverse', sum((-1)**k*q**(C2(k+1)-n*k)*qbin(n,k,q)*poch(x,q,k) for k in range(n+1)), x**n)
a,c,x=mp.mpf('0.6'),mp.mpf('0.3'),mp.mpf('0.8')
rep('q-gauss x form', phi([a,1/x],[c],q,c*x/a), P(c/a,c*x,q=q)/P(c,c*x/a,q=q))
a,b,c=mp.mpf('0.6'),mp.mpf('0.5'),mp.mpf('0.2')
rep('q-gauss standard form', phi([a,b],[c],q,c/(a*b)), P(c/a,c/b,q=q)/P(c,c/(a*b),q=q))
for n in range(0,9):
  rep(f'q-gauss-finite n={n}', sum((-1)**k*qbin(n,k,q)*q**C2(n-k)*poch(c/a,q,k)/poch(c,q,k) for k in range(n+1)), q**C2(n)*poch(a,q,n)*(c/a)**n/poch(c,q,n))
n=6
rep('q-gauss-finite a->inf', sum((-1)**(n-k)*qbin(n,k,q)*q**C2(n-k)/poch(c,q,k) for k in range(n+1)), q**(2*C2(n))*c**n/poch(c,q,n))
a,x,z=mp.mpf('0.4'),mp.mpf('0.3'),mp.mpf('0.6')
rep('rogers-fine', phi([a,q],[x],q,z)*0+sum(poch(a,q,n)/poch(x,q,n)*z**n for n in range(300)),
    sum((1-a*z*q**(2*k))*q**(2*C2(k))*poch(a,q,k)*poch(a*z*q/x,q,k)/(poch(z,q,k+1)*poch(x,q,k))*(x*z)**k for k in range(200)))
a,b,x=mp.mpf('0.6'),mp.mpf('0.2'),mp.mpf('0.5')
L=sum(poch(a,q,n)/poch(b,q,n)*x**n for n in range(-300,300))
rep('ramanujan-1psi1', L, P(q,b/a,a*x,q/(a*x),q=q)/P(b,q/a,x,b/(a*x),q=q))
a,b,x=mp.mpf('0.4'),mp.mpf('0.2'),mp.mpf('0.3')
rep('carlitz-lebesgue', sum((-1)**k*q**C2(k)*poch(x,q,k)*a**k/(poch(q,q,k)*poch(b*x,q,k)) for k in range(200)),
    P(a,x,q=q)/pinf(b*x,q)*sum(poch(b,q,k)/(poch(q,q,k)*poch(a,q,k))*x**k for k in range(300)))
b,x=mp.mpf('0.2'),mp.mpf('0.3')
Fy=lambda y: sum((-1)**i*q**C2(i)*pinf(b*x*q**i,q)/poch(q,q,i)*y**i/(pinf(y,q)*pinf(x*y*q**i,q)) for i in range(200))
for n in range(0,11):
    rep(f'carlitz-lebesgue finite n={n}', sum((-1)**k*q**(C2(k+1)-n*k)*qbin(n,k,q)*poch(b*q**k,q,n-1)*Fy(b*q**k) for k in range(n+1)), (b*x)**n/(1-b*q**(2*n-1)))
k=3; rep('carlitz-lebesgue F(bq^k)', Fy(b*q**k), sum((-1)**i*q**C2(i)*qbin(k,i,q)*(b*x)**i/poch(b*q**k,q,i) for i in range(k+1)))
a,b,c=mp.mpf('0.3'),mp.mpf('0.5'),mp.mpf('0.7')
for n in [1,3,7]:
    rep(f'q-pfaff-saalschutz n={n}', phi([q**-n,a*q**n,a*q/(b*c)],[a*q/b,a*q/c],q,q), (a*q/(b*c))**n*P(b,c,q=q,n=n)/P(a*q/b,a*q/c,q=q,n=n))
    rep(f'q-pfaff-saalschutz expanded n={n}', sum(poch(q**-n,q,k)/poch(q,q,k)*poch(a*q**n,q,k)/poch(a*q,q,k)*q**k*P(a*q,a*q/(b*c),q=q,n=k)/P(a*q/b,a*q/c,q=q,n=k) for k in range(n+1)),
        P(b,c,q=q,n=n)/P(a*q/b,a*q/c,q=q,n=n)*(a*q/(b*c))**n)
q=mp.mpf('0.4'); a,b,c,d=mp.mpf('0.2'),mp.mpf('0.5'),mp.mpf('0.6'),mp.mpf('0.7')
def vwp(a,ups,los,z,N=400):
    tot=0
    for n in range(N):
        t=(1-a*q**(2*n))/(1-a)*poch(a,q,n)/poch(q,q,n)*P(*ups,q=q,n=n)/P(*los,q=q,n=n)*z**n
        tot+=t
        if t==0 and n>0: break
    return tot
rep('rogers-6phi5', vwp(a,[b,c,d],[a*q/b,a*q/c,a*q/d],a*q/(b*c*d)), P(a*q,a*q/(c*d),a*q/(b*d),a*q/(b*c),q=q)/P(a*q/b,a*q/c,a*q/d,a*q/(b*c*d),q=q))
for n in [0,1,4]:
    rep(f'rogers-6phi5 terminating n={n}', vwp(a,[b,c,q**-n],[a*q/b,a*q/c,a*q**(1+n)],a*q**(1+n)/(b*c)), P(a*q,a*q/(b*c),q=q,n=n)/P(a*q/b,a*q/c,q=q,n=n))
a,b,c,d,f=mp.mpf('0.2'),mp.mpf('0.5'),mp.mpf('0.6'),mp.mpf('0.7'),mp.mpf('0.3')
for N in [2,5]:
    e=q**-N
    L=vwp(a,[b,c,d,e,f],[a*q/b,a*q/c,a*q/d,a*q/e,a*q/f],a*a*q*q/(b*c*d*e*f))
    R=P(a*q,a*q/(e*f),a*q/(d*f),a*q/(d*e),q=q)/P(a*q/d,a*q/e,a*q/f,a*q/(d*e*f),q=q)*phi([a*q/(b*c),d,e,f],[d*e*f/a,a*q/b,a*q/c],q,q)
    rep(f'watson e=q^-{N}', L,R)
a,b,c,d,e=mp.mpf('0.2'),mp.mpf('0.5'),mp.mpf('0.6'),mp.mpf('0.7'),mp.mpf('0.3')
for n in [0,2,5]:
    L=vwp(a,[b,c,d,e,q**-n],[a*q/b,a*q/c,a*q/d,a*q/e,a*q**(n+1)],a*a*q**(n+2)/(b*c*d*e))
    R=P(a*q,a*q/(d*e),q=q,n=n)/P(a*q/d,a*q/e,q=q,n=n)*phi([a*q/(b*c),d,e,q**-n],[a*q/b,a*q/c,d*e*q**-n/a],q,q)
    rep(f'watson 8phi7 n={n}',L,R)
q=mp.mpf('0.5'); a,b,c,z=mp.mpf('0.3'),mp.mpf('0.6'),mp.mpf('0.4'),mp.mpf('0.5')
rep('heine', phi([a,b],[c],q,z), P(b,a*z,q=q)/P(c,z,q=q)*phi([z,c/b],[a*z],q,b))
for n in [3]:
    rep('heine finite', sum((-1)**k*q**C2(k)*qbin(n,k,q)*c**k for k in range(n+1)), poch(c,q,n))
    rep('heine finite inverse', sum((-1)**k*q**(C2(k+1)-n*k)*qbin(n,k,q)*poch(c,q,k) for k in range(n+1)), c**n)
rep('jackson', phi([a,b],[c],q,z), pinf(a*z,q)/pinf(z,q)*phi([a,c/b],[c,a*z],q,b*z))
b=mp.mpf('0.3')
for n in [0,2,4]:
  for m in [0,1,3]:
    rep(f'jackson finite n={n} m={m}', sum((-1)**(n-k)*qbin(n,k,q)*q**C2(k)/poch(b*q**(n-k),q,m+1) for k in range(n+1)), qbin(m+n,m,q)*b**n*q**C2(n)*poch(q,q,n)/poch(b,q,m+n+1))
q,p=mp.mpf('0.5'),mp.mpf('0.4'); a,b,x=mp.mpf('0.3'),mp.mpf('0.2'),mp.mpf('0.7')
for m in [0,2,4]:
    L=sum((1-a*p**k*q**k)*(1-b*p**k*q**-k)/((1-a)*(1-b))*P(a,b,q=p,n=k)*P(x,a/(b*x),q=q,n=k)/(P(q,a*q/b,q=q,n=k)*P(a*p/x,b*p*x,q=p,n=k))*q**k for k in range(m+1))
    R=P(a*p,b*p,q=p,n=m)*P(x*q,a*q/(b*x),q=q,n=m)/(P(q,a*q/b,q=q,n=m)*P(a*p/x,b*p*x,q=p,n=m))
    rep(f'gasper-bibasic m={m}',L,R)
b=mp.mpf('0.2')
for N in range(0,9):
  for m in range(0,5):
    L=qbin(N+m+1,m+1,q)*sum((-1)**K*q**C2(K+1)*qbin(N,K,q)*(1-q**(m+1))/(1-q**(m+1+K))*(1-a*q**(2*K+2*m+2)/b)/(1-a*q**(K+m+1)/b)
        *P(a*(p*q)**(m+1)*q**K,b*(p/q)**(m+1)*q**-K,q=p,n=N)/poch(a*q**(2*m+2+K)/b,q,N+1) for K in range(N+1))
    R=P(a*p**(m+1),b*p**(m+1),q=p,n=N)/poch(a*q**(m+1)/b,q,N+1)
    L2=qbin(N+m+1,m+1,q)*q**(-N*(m+1))*sum((-1)**K*q**(C2(K+1)-N*K)*qbin(N,K,q)*(1-q**(m+1))/(1-q**(m+1+K))*poch(a*(p*q)**(m+1)*q**K,p,N) for K in range(N+1))
    R2=poch(a*p**(m+1),p,N)
    Fd=lambda t: poch(a*(p*q)**(m+1)*t,p,N)/(1-t*q**(m+1))
    L3=sum((-1)**k*q**(C2(k+1)-N*k)*qbin(N,k,q)*Fd(q**k) for k in range(N+1))
    R3=q**(N*(m+1))*poch(a*p**(m+1),p,N)/(1-q**(m+1))/qbin(N+m+1,m+1,q)
    e=max(abs(L-R)/abs(R),abs(L2-R2)/abs(R2),abs(L3-R3)/abs(R3))
    if e>1e-25: print('bibasic-new FAIL',N,m,mp.nstr(abs(L-R)/abs(R),3),mp.nstr(abs(L2-R2)/abs(R2),3),mp.nstr(abs(L3-R3)/abs(R3),3))
print('bibasic-new done')
for n in range(3,8):
  for m in range(0,n-1):
    L=sum((-1)**(k-m-1)*q**(C2(k)+C2(m+1)-m*k)*qbin(n,k,q)*qbin(k-1,m,q)*(1-a*q**(2*k)/b)/(1-a*q**k/b)*P(a*p**(m+1)*q**k,b*p**(m+1)*q**-k,q=p,n=n-m-1)/poch(a*q**(m+k+1)/b,q,n-m) for k in range(m+1,n+1))
    R=P(a*p**(m+1),b*p**(m+1),q=p,n=n-m-1)/poch(a*q**(m+1)/b,q,n-m)
    if abs(L-R)/abs(R)>1e-25: print('bibasic-new uncleared FAIL',n,m,mp.nstr(abs(L-R)/abs(R),3))
print('bibasic-new uncleared done')

b=mp.mpf('0.15')
for N in range(0,9):
  for m in range(0,5):
    L=qbin(N+m+1,m+1,q)*sum((-1)**K*q**C2(K+1)*qbin(N,K,q)*(1-q**(m+1))/(1-q**(m+1+K))*(1-a*q**(2*K+2*m+2)/b)
        *mp.fprod([1-a*q**(m+1+j)/b for j in range(N+1) if j!=K])
        *P(a*(p*q)**(m+1)*q**K,b*(p/q)**(m+1)*q**-K,q=p,n=N)/poch(a*q**(2*m+2+K)/b,q,N+1) for K in range(N+1))
    R=P(a*p**(m+1),b*p**(m+1),q=p,n=N)
    if abs(L-R)/abs(R)>1e-25: print('bibasic-new cleared FAIL',N,m,mp.nstr(abs(L-R)/abs(R),3))
print('bibasic-new cleared done')
